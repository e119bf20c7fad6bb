#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ralg/dsl/ast.hpp"

namespace ralg::dsl {

enum class Tok {
  Name,
  Int,
  Atom,
  String,
  Equals,
  EqEq,
  Colon,
  Arrow,
  Slash,
  Comma,
  LBracket,
  RBracket,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LAngle,
  RAngle,
  DotDot,
  End,
  Error,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // names without decoration, atom names without the quote, string contents
  SourceSpan span;
};

std::string describe(Tok t);

/// Splits text into tokens; lexical errors become Tok::Error tokens and
/// diagnostics. The last token is always Tok::End.
std::vector<Token> tokenize(std::string_view text, std::vector<Diagnostic>& diags);

}  // namespace ralg::dsl
