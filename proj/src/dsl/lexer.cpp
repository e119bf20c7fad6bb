#include "ralg/dsl/lexer.hpp"

#include <cctype>

namespace ralg::dsl {

std::string describe(Tok t) {
  switch (t) {
    case Tok::Name: return "name";
    case Tok::Int: return "integer";
    case Tok::Atom: return "atom";
    case Tok::String: return "string";
    case Tok::Equals: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::Colon: return "':'";
    case Tok::Arrow: return "'->'";
    case Tok::Slash: return "'/'";
    case Tok::Comma: return "','";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LAngle: return "'<'";
    case Tok::RAngle: return "'>'";
    case Tok::DotDot: return "'..'";
    case Tok::End: return "end of input";
    case Tok::Error: return "invalid token";
  }
  return "token";
}

namespace {

bool name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '*' || c == '.';
}
bool name_char(char c) { return name_start(c) || std::isdigit(static_cast<unsigned char>(c)); }
bool atom_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  Lexer(std::string_view text, std::vector<Diagnostic>& diags) : text_(text), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (pos_ >= text_.size()) {
        start_line_ = line_;
        start_col_base_ = line_start_;
        out.push_back(make(Tok::End, pos_, ""));
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void skip_trivia() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }

  Token make(Tok kind, std::size_t start, std::string text) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.span = SourceSpan{start_line_, start - start_col_base_ + 1, start, pos_};
    return t;
  }

  Token next() {
    const std::size_t start = pos_;
    start_line_ = line_;
    start_col_base_ = line_start_;
    const char c = text_[pos_];
    auto single = [&](Tok k) {
      advance();
      return make(k, start, std::string(1, c));
    };
    auto peek = [&](std::size_t k) { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; };

    if (c == '-' && peek(1) == '>') {
      advance();
      advance();
      return make(Tok::Arrow, start, "->");
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      advance();
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
      return make(Tok::Int, start, std::string(text_.substr(start, pos_ - start)));
    }
    if (c == '.' && peek(1) == '.') {
      advance();
      advance();
      return make(Tok::DotDot, start, "..");
    }
    if (name_start(c)) {
      while (pos_ < text_.size() && name_char(text_[pos_])) advance();
      return make(Tok::Name, start, std::string(text_.substr(start, pos_ - start)));
    }
    if (c == '\'') {
      advance();
      const std::size_t body = pos_;
      while (pos_ < text_.size() && atom_char(text_[pos_])) advance();
      if (pos_ == body) return error(start, "atom name expected after quote");
      return make(Tok::Atom, start, std::string(text_.substr(body, pos_ - body)));
    }
    if (c == '"') {
      advance();
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') {
        s += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size() || text_[pos_] != '"') return error(start, "unterminated string");
      advance();
      return make(Tok::String, start, std::move(s));
    }
    if (c == '=' && peek(1) == '=') {
      advance();
      advance();
      return make(Tok::EqEq, start, "==");
    }
    switch (c) {
      case '=': return single(Tok::Equals);
      case ':': return single(Tok::Colon);
      case '/': return single(Tok::Slash);
      case ',': return single(Tok::Comma);
      case '[': return single(Tok::LBracket);
      case ']': return single(Tok::RBracket);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '{': return single(Tok::LBrace);
      case '}': return single(Tok::RBrace);
      case '<': return single(Tok::LAngle);
      case '>': return single(Tok::RAngle);
      default: break;
    }
    advance();
    while (pos_ < text_.size() && (static_cast<unsigned char>(text_[pos_]) & 0xC0) == 0x80) advance();
    return error(start, "unexpected character '" + std::string(text_.substr(start, pos_ - start)) + "'");
  }

  Token error(std::size_t start, std::string msg) {
    Token t = make(Tok::Error, start, std::string(text_.substr(start, pos_ - start)));
    diags_.push_back({t.span, std::move(msg)});
    return t;
  }

  std::string_view text_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
  std::size_t start_line_ = 1;
  std::size_t start_col_base_ = 0;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text, std::vector<Diagnostic>& diags) { return Lexer(text, diags).run(); }

}  // namespace ralg::dsl
