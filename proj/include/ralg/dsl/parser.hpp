#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ralg/dsl/ast.hpp"

namespace ralg::dsl {

struct ParseResult {
  FileAst ast;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

ParseResult parse(std::string_view text);

/// Canonical text; parse(pretty_print(ast)) == ast for every parsed ast.
std::string pretty_print(const FileAst& ast);
std::string print_literal(const Literal& lit);
std::string print_predicate(const Predicate& p);

}  // namespace ralg::dsl
