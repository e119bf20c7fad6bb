#include "ralg/dsl/parser.hpp"

#include <set>

#include "ralg/dsl/lexer.hpp"

namespace ralg::dsl {

bool operator==(const Literal& a, const Literal& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* v = std::get_if<std::shared_ptr<VecLit>>(&a.node))
    return (*v)->coords == std::get<std::shared_ptr<VecLit>>(b.node)->coords;
  if (const auto* l = std::get_if<std::shared_ptr<ListLit>>(&a.node))
    return (*l)->items == std::get<std::shared_ptr<ListLit>>(b.node)->items;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::shared_ptr<VecLit>> || std::is_same_v<T, std::shared_ptr<ListLit>>)
          return false;
        else
          return x == std::get<T>(b.node);
      },
      a.node);
}

std::string format_diagnostic(const Diagnostic& d, const std::string& file) {
  std::string where = file.empty() ? "" : file + ":";
  return where + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": error: " + d.message;
}

namespace {

const std::set<std::string> kDeclKeywords{"phylum", "op", "sort", "seq", "coloring", "experiment"};
const std::set<std::string> kBuiltinKinds{"add", "mul", "smul", "scale", "ksig"};

struct ParseError {
  Diagnostic diag;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags) : toks_(std::move(toks)), diags_(diags) {}

  FileAst run() {
    FileAst file;
    while (!at(Tok::End)) {
      try {
        file.decls.push_back(decl());
      } catch (const ParseError& e) {
        diags_.push_back(e.diag);
        recover();
      }
    }
    return file;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_word(const char* w) const { return at(Tok::Name) && cur().text == w; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError{{cur().span, msg}}; }
  [[noreturn]] void fail_at(const SourceSpan& s, const std::string& msg) const { throw ParseError{{s, msg}}; }

  Token take() {
    Token t = cur();
    if (!at(Tok::End)) ++pos_;
    return t;
  }
  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail("expected " + what + ", found " + found());
    return take();
  }
  void expect_word(const char* w) {
    if (!at_word(w)) fail(std::string("expected '") + w + "', found " + found());
    take();
  }
  std::string found() const {
    if (at(Tok::End)) return "end of input";
    switch (cur().kind) {
      case Tok::Name:
      case Tok::Int:
      case Tok::Atom:
      case Tok::String:
        return describe(cur().kind) + " '" + cur().text + "'";
      default:
        return describe(cur().kind);
    }
  }
  bool list_done() const {
    return at(Tok::RBracket) || at(Tok::End) || (at(Tok::Name) && kDeclKeywords.contains(cur().text));
  }

  void recover() {
    if (!at(Tok::End) && !(at(Tok::Name) && kDeclKeywords.contains(cur().text))) take();
    while (!at(Tok::End) && !(at(Tok::Name) && kDeclKeywords.contains(cur().text))) take();
  }

  SourceSpan span_from(const SourceSpan& start) const {
    const SourceSpan& last = toks_[pos_ == 0 ? 0 : pos_ - 1].span;
    return SourceSpan{start.line, start.column, start.begin, std::max(start.begin, last.end)};
  }

  Ident ident(const std::string& what) {
    Token t = expect(Tok::Name, what);
    return Ident{t.text, Loc{t.span}};
  }

  std::uint32_t small_int(const std::string& what) {
    Token t = expect(Tok::Int, what);
    if (t.text.front() == '-' || t.text.size() > 9) fail_at(t.span, what + " must be a nonnegative integer below 10^9");
    return static_cast<std::uint32_t>(std::stoul(t.text));
  }

  Decl decl() {
    if (!at(Tok::Name) || !kDeclKeywords.contains(cur().text))
      fail("expected a declaration (phylum, op, sort, seq, coloring or experiment), found " + found());
    const std::string kw = cur().text;
    const SourceSpan start = take().span;
    if (kw == "phylum") return phylum(start);
    if (kw == "op") return op(start);
    if (kw == "sort") return sort(start);
    if (kw == "seq") return seq(start);
    if (kw == "coloring") return coloring(start);
    return experiment(start);
  }

  PhylumDecl phylum(const SourceSpan& start) {
    PhylumDecl d;
    d.name = ident("phylum name");
    expect(Tok::Equals, "'='");
    d.carrier = carrier();
    d.loc.span = span_from(start);
    return d;
  }

  Carrier carrier() {
    if (at_word("rationals")) {
      take();
      return RationalsCarrier{};
    }
    if (at_word("gf")) {
      take();
      expect(Tok::LParen, "'('");
      GfCarrier g{small_int("field size")};
      expect(Tok::RParen, "')'");
      return g;
    }
    if (at_word("vspace")) {
      take();
      expect(Tok::LParen, "'('");
      VspaceCarrier v;
      v.field = ident("field phylum name");
      expect(Tok::Comma, "','");
      v.dim = small_int("dimension");
      expect(Tok::RParen, "')'");
      return v;
    }
    if (at_word("atoms")) {
      take();
      expect(Tok::LParen, "'('");
      AtomsCarrier a;
      if (at(Tok::Int)) {
        const Token lo_tok = cur();
        const std::uint32_t lo = small_int("range start");
        expect(Tok::DotDot, "'..'");
        const std::uint32_t hi = small_int("range end");
        if (hi < lo || hi - lo > 100000) fail_at(lo_tok.span, "atom range is empty or too large");
        for (std::uint32_t i = lo; i <= hi; ++i) a.atoms.push_back(std::to_string(i));
      } else {
        while (at(Tok::Atom)) a.atoms.push_back(take().text);
      }
      expect(Tok::RParen, "')'");
      return a;
    }
    fail("expected a carrier (atoms, gf, rationals or vspace), found " + found());
  }

  SortRef sort_ref() {
    if (at(Tok::Int)) {
      const SourceSpan s = cur().span;
      return SortRef{small_int("sort index"), Loc{s}};
    }
    if (at(Tok::Name)) {
      Token t = take();
      return SortRef{t.text, Loc{t.span}};
    }
    fail("expected a phylum name or index, found " + found());
  }

  OpDecl op(const SourceSpan& start) {
    OpDecl d;
    d.name = ident("operation name");
    expect(Tok::Colon, "':'");
    while (at(Tok::Name) || at(Tok::Int)) d.inputs.push_back(sort_ref());
    if (d.inputs.empty()) fail("an operation needs at least one input sort");
    expect(Tok::Arrow, "'->'");
    d.output = sort_ref();
    expect(Tok::Equals, "'='");
    if (at_word("builtin")) {
      take();
      BuiltinOpBody b;
      if (at(Tok::Name) && kBuiltinKinds.contains(cur().text)) {
        b.kind = take().text;
        if (b.kind == "scale") {
          expect(Tok::LParen, "'('");
          b.arg = literal();
          expect(Tok::RParen, "')'");
        }
      }
      d.body = std::move(b);
    } else if (at_word("table")) {
      take();
      expect(Tok::LBracket, "'['");
      TableOpBody t;
      while (!list_done()) t.entries.push_back(literal());
      expect(Tok::RBracket, "']'");
      d.body = std::move(t);
    } else if (at_word("const")) {
      take();
      d.body = ConstOpBody{literal()};
    } else {
      fail("expected an operation body (builtin, table or const), found " + found());
    }
    d.loc.span = span_from(start);
    return d;
  }

  std::vector<SortRef> sort_list() {
    expect(Tok::LBracket, "'['");
    std::vector<SortRef> out;
    while (at(Tok::Name) || at(Tok::Int)) out.push_back(sort_ref());
    expect(Tok::RBracket, "']'");
    return out;
  }

  SortDecl sort(const SourceSpan& start) {
    SortDecl d;
    d.name = ident("sort name");
    expect(Tok::Equals, "'='");
    if (at_word("prefix")) {
      take();
      d.prefix = sort_list();
    }
    expect_word("period");
    const SourceSpan ps = cur().span;
    d.period = sort_list();
    if (d.period.empty()) fail_at(ps, "the period of a sort must be nonempty");
    d.loc.span = span_from(start);
    return d;
  }

  SeqDecl seq(const SourceSpan& start) {
    SeqDecl d;
    d.name = ident("sequence name");
    expect(Tok::Equals, "'='");
    expect(Tok::LBracket, "'['");
    while (!list_done()) d.values.push_back(literal());
    expect(Tok::RBracket, "']'");
    d.loc.span = span_from(start);
    return d;
  }

  ColoringDecl coloring(const SourceSpan& start) {
    ColoringDecl d;
    d.name = ident("coloring name");
    expect(Tok::Equals, "'='");
    if (at_word("table")) {
      take();
      d.phylum = sort_ref();
      expect(Tok::LBracket, "'['");
      TableColoring t;
      while (at(Tok::Int)) t.colors.push_back(small_int("color"));
      expect(Tok::RBracket, "']'");
      d.spec = std::move(t);
    } else if (at_word("predicate")) {
      take();
      d.phylum = sort_ref();
      d.spec = PredicateColoring{predicate()};
    } else if (at_word("random")) {
      take();
      d.phylum = sort_ref();
      RandomColoring r;
      expect_word("colors");
      r.colors = small_int("color count");
      if (at_word("seed")) {
        take();
        const Token t = expect(Tok::Int, "seed");
        if (t.text.front() == '-' || t.text.size() > 19) fail_at(t.span, "seed must be a nonnegative 64-bit integer");
        r.seed = std::stoull(t.text);
      }
      d.spec = r;
    } else if (at_word("const")) {
      take();
      d.phylum = sort_ref();
      d.spec = ConstColoring{};
    } else {
      fail("expected a coloring (table, predicate, random or const), found " + found());
    }
    d.loc.span = span_from(start);
    return d;
  }

  Predicate predicate() {
    const SourceSpan start = cur().span;
    Predicate first = pred_and();
    if (!at_word("or")) return first;
    Predicate p{PredKind::Or, {std::move(first)}, {}, {}};
    while (at_word("or")) {
      take();
      p.children.push_back(pred_and());
    }
    p.loc.span = span_from(start);
    return p;
  }

  Predicate pred_and() {
    const SourceSpan start = cur().span;
    Predicate first = pred_unary();
    if (!at_word("and")) return first;
    Predicate p{PredKind::And, {std::move(first)}, {}, {}};
    while (at_word("and")) {
      take();
      p.children.push_back(pred_unary());
    }
    p.loc.span = span_from(start);
    return p;
  }

  Predicate pred_unary() {
    const SourceSpan start = cur().span;
    Predicate p;
    if (at(Tok::LParen)) {
      take();
      p = predicate();
      expect(Tok::RParen, "')'");
      return p;
    }
    if (!at(Tok::Name)) fail("expected a predicate, found " + found());
    const std::string w = take().text;
    if (w == "not") {
      p.kind = PredKind::Not;
      p.children.push_back(pred_unary());
    } else if (w == "true") {
      p.kind = PredKind::True;
    } else if (w == "zero") {
      p.kind = PredKind::Zero;
    } else if (w == "leading_coeff_one") {
      p.kind = PredKind::LeadingCoeffOne;
    } else if (w == "in") {
      p.kind = PredKind::In;
      expect(Tok::LBracket, "'['");
      while (!list_done()) p.args.push_back(literal());
      expect(Tok::RBracket, "']'");
    } else if (w == "mod") {
      p.kind = PredKind::Mod;
      expect(Tok::LParen, "'('");
      p.args.push_back(int_literal());
      expect(Tok::RParen, "')'");
      expect(Tok::EqEq, "'=='");
      p.args.push_back(int_literal());
    } else if (w == "in_Y" || w == "in_X") {
      p.kind = w == "in_Y" ? PredKind::InY : PredKind::InX;
      expect(Tok::LParen, "'('");
      const Token n = expect(Tok::Name, "sequence name");
      p.args.push_back(Literal{NameLit{n.text}, Loc{n.span}});
      expect(Tok::Comma, "','");
      p.args.push_back(int_literal());
      if (p.kind == PredKind::InX) {
        expect(Tok::Comma, "','");
        if (!at(Tok::LAngle)) fail("expected a vector, found " + found());
        p.args.push_back(literal());
      }
      expect(Tok::RParen, "')'");
    } else {
      fail_at(toks_[pos_ - 1].span, "unknown predicate '" + w + "'");
    }
    p.loc.span = span_from(start);
    return p;
  }

  Literal int_literal() {
    const Token t = expect(Tok::Int, "integer");
    return Literal{IntLit{BigInt(t.text)}, Loc{t.span}};
  }

  Literal literal() {
    const SourceSpan start = cur().span;
    if (at(Tok::Int)) {
      const Token t = take();
      if (at(Tok::Slash)) {
        take();
        const Token d = expect(Tok::Int, "denominator");
        BigInt den(d.text);
        if (den == 0) fail_at(d.span, "zero denominator");
        return Literal{RatLit{BigInt(t.text), den}, Loc{span_from(start)}};
      }
      return Literal{IntLit{BigInt(t.text)}, Loc{t.span}};
    }
    if (at(Tok::Atom)) {
      const Token t = take();
      return Literal{AtomLit{t.text}, Loc{t.span}};
    }
    if (at(Tok::Name)) {
      const Token t = take();
      return Literal{NameLit{t.text}, Loc{t.span}};
    }
    if (at(Tok::String)) {
      const Token t = take();
      return Literal{StringLit{t.text}, Loc{t.span}};
    }
    if (at(Tok::LAngle)) {
      take();
      auto v = std::make_shared<VecLit>();
      while (!at(Tok::RAngle) && !at(Tok::End)) {
        if (!at(Tok::Int)) fail("vector coordinates must be integers or rationals, found " + found());
        v->coords.push_back(literal());
      }
      expect(Tok::RAngle, "'>'");
      return Literal{v, Loc{span_from(start)}};
    }
    if (at(Tok::LBracket)) {
      take();
      auto l = std::make_shared<ListLit>();
      while (!list_done()) l->items.push_back(literal());
      expect(Tok::RBracket, "']'");
      return Literal{l, Loc{span_from(start)}};
    }
    fail("expected a value, found " + found());
  }

  ExperimentDecl experiment(const SourceSpan& start) {
    ExperimentDecl d;
    d.name = ident("experiment name");
    expect(Tok::LBrace, "'{'");
    while (at(Tok::Name)) {
      KeyValue kv;
      kv.key = ident("key");
      expect(Tok::Equals, "'='");
      kv.value = literal();
      d.entries.push_back(std::move(kv));
    }
    expect(Tok::RBrace, "'}' or a key");
    d.loc.span = span_from(start);
    return d;
  }

  std::vector<Token> toks_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
};

std::string sort_ref_text(const SortRef& s) {
  if (const auto* n = std::get_if<std::string>(&s.ref)) return *n;
  return std::to_string(std::get<std::uint32_t>(s.ref));
}

std::string sort_list_text(const std::vector<SortRef>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i > 0 ? " " : "") + sort_ref_text(v[i]);
  return s + "]";
}

template <class T>
std::string joined(const std::vector<T>& items, const char* open, const char* close) {
  std::string s = open;
  for (std::size_t i = 0; i < items.size(); ++i) s += (i > 0 ? " " : "") + print_literal(items[i]);
  return s + close;
}

std::string print_pred_prec(const Predicate& p, int prec) {
  std::string s;
  int own = 3;
  switch (p.kind) {
    case PredKind::True: return "true";
    case PredKind::Zero: return "zero";
    case PredKind::LeadingCoeffOne: return "leading_coeff_one";
    case PredKind::In: return "in " + joined(p.args, "[", "]");
    case PredKind::Mod: return "mod(" + print_literal(p.args[0]) + ") == " + print_literal(p.args[1]);
    case PredKind::InY: return "in_Y(" + print_literal(p.args[0]) + ", " + print_literal(p.args[1]) + ")";
    case PredKind::InX:
      return "in_X(" + print_literal(p.args[0]) + ", " + print_literal(p.args[1]) + ", " + print_literal(p.args[2]) + ")";
    case PredKind::Not: return "not " + print_pred_prec(p.children[0], 3);
    case PredKind::And:
      own = 2;
      for (std::size_t i = 0; i < p.children.size(); ++i) s += (i > 0 ? " and " : "") + print_pred_prec(p.children[i], 3);
      break;
    case PredKind::Or:
      own = 1;
      for (std::size_t i = 0; i < p.children.size(); ++i) s += (i > 0 ? " or " : "") + print_pred_prec(p.children[i], 2);
      break;
  }
  return own < prec ? "(" + s + ")" : s;
}

}  // namespace

ParseResult parse(std::string_view text) {
  ParseResult out;
  std::vector<Token> toks = tokenize(text, out.diagnostics);
  std::vector<Token> clean;
  for (Token& t : toks)
    if (t.kind != Tok::Error) clean.push_back(std::move(t));
  out.ast = Parser(std::move(clean), out.diagnostics).run();
  return out;
}

std::string print_literal(const Literal& lit) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, IntLit>) return x.value.str();
        else if constexpr (std::is_same_v<T, RatLit>) return x.num.str() + "/" + x.den.str();
        else if constexpr (std::is_same_v<T, AtomLit>) return "'" + x.name;
        else if constexpr (std::is_same_v<T, NameLit>) return x.name;
        else if constexpr (std::is_same_v<T, StringLit>) return "\"" + x.text + "\"";
        else if constexpr (std::is_same_v<T, std::shared_ptr<VecLit>>) return joined(x->coords, "<", ">");
        else return joined(x->items, "[", "]");
      },
      lit.node);
}

std::string print_predicate(const Predicate& p) { return print_pred_prec(p, 0); }

std::string pretty_print(const FileAst& ast) {
  std::string out;
  for (const Decl& d : ast.decls) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, PhylumDecl>) {
            out += "phylum " + x.name.name + " = ";
            std::visit(
                [&](const auto& c) {
                  using C = std::decay_t<decltype(c)>;
                  if constexpr (std::is_same_v<C, AtomsCarrier>) {
                    out += "atoms(";
                    for (std::size_t i = 0; i < c.atoms.size(); ++i) out += (i > 0 ? " '" : "'") + c.atoms[i];
                    out += ")";
                  } else if constexpr (std::is_same_v<C, GfCarrier>) {
                    out += "gf(" + std::to_string(c.p) + ")";
                  } else if constexpr (std::is_same_v<C, RationalsCarrier>) {
                    out += "rationals";
                  } else {
                    out += "vspace(" + c.field.name + ", " + std::to_string(c.dim) + ")";
                  }
                },
                x.carrier);
            out += "\n";
          } else if constexpr (std::is_same_v<T, OpDecl>) {
            out += "op " + x.name.name + " :";
            for (const SortRef& s : x.inputs) out += " " + sort_ref_text(s);
            out += " -> " + sort_ref_text(x.output) + " = ";
            if (const auto* b = std::get_if<BuiltinOpBody>(&x.body)) {
              out += "builtin";
              if (!b->kind.empty()) out += " " + b->kind;
              if (b->arg) out += "(" + print_literal(*b->arg) + ")";
            } else if (const auto* t = std::get_if<TableOpBody>(&x.body)) {
              out += "table " + joined(t->entries, "[", "]");
            } else {
              out += "const " + print_literal(std::get<ConstOpBody>(x.body).value);
            }
            out += "\n";
          } else if constexpr (std::is_same_v<T, SortDecl>) {
            out += "sort " + x.name.name + " = prefix " + sort_list_text(x.prefix) + " period " +
                   sort_list_text(x.period) + "\n";
          } else if constexpr (std::is_same_v<T, SeqDecl>) {
            out += "seq " + x.name.name + " = " + joined(x.values, "[", "]") + "\n";
          } else if constexpr (std::is_same_v<T, ColoringDecl>) {
            out += "coloring " + x.name.name + " = ";
            const std::string ph = sort_ref_text(x.phylum);
            if (const auto* t = std::get_if<TableColoring>(&x.spec)) {
              out += "table " + ph + " [";
              for (std::size_t i = 0; i < t->colors.size(); ++i) out += (i > 0 ? " " : "") + std::to_string(t->colors[i]);
              out += "]";
            } else if (const auto* p = std::get_if<PredicateColoring>(&x.spec)) {
              out += "predicate " + ph + " " + print_predicate(p->pred);
            } else if (const auto* r = std::get_if<RandomColoring>(&x.spec)) {
              out += "random " + ph + " colors " + std::to_string(r->colors);
              if (r->seed) out += " seed " + std::to_string(*r->seed);
            } else {
              out += "const " + ph;
            }
            out += "\n";
          } else {
            out += "experiment " + x.name.name + " {\n";
            for (const KeyValue& kv : x.entries) out += "  " + kv.key.name + " = " + print_literal(kv.value) + "\n";
            out += "}\n";
          }
        },
        d);
  }
  return out;
}

}  // namespace ralg::dsl
