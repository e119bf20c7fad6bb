#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ralg/field.hpp"

namespace ralg::dsl {

struct SourceSpan {
  std::size_t line = 1;  // 1-based
  std::size_t column = 1;
  std::size_t begin = 0;  // byte offsets, end exclusive
  std::size_t end = 0;
};

/// Source location attached to an AST node. Locations take no part in
/// structural equality, so re-parsed text compares equal to its origin.
struct Loc {
  SourceSpan span;
  friend bool operator==(const Loc&, const Loc&) { return true; }
};

struct Diagnostic {
  SourceSpan span;
  std::string message;
};

std::string format_diagnostic(const Diagnostic& d, const std::string& file = "");

struct IntLit {
  BigInt value;
  friend bool operator==(const IntLit&, const IntLit&) = default;
};
struct RatLit {
  BigInt num;
  BigInt den;
  friend bool operator==(const RatLit&, const RatLit&) = default;
};
struct AtomLit {
  std::string name;
  friend bool operator==(const AtomLit&, const AtomLit&) = default;
};
struct NameLit {
  std::string name;
  friend bool operator==(const NameLit&, const NameLit&) = default;
};
struct StringLit {
  std::string text;
  friend bool operator==(const StringLit&, const StringLit&) = default;
};
struct VecLit;
struct ListLit;

/// Literal: integer, rational a/b, 'atom, <vector>, name, "string" or [list].
struct Literal {
  std::variant<IntLit, RatLit, AtomLit, NameLit, StringLit, std::shared_ptr<VecLit>, std::shared_ptr<ListLit>> node;
  Loc loc;

  friend bool operator==(const Literal& a, const Literal& b);
};

struct VecLit {
  std::vector<Literal> coords;
};
struct ListLit {
  std::vector<Literal> items;
};

struct Ident {
  std::string name;
  Loc loc;
  friend bool operator==(const Ident&, const Ident&) = default;
};

/// A phylum named or given by index.
struct SortRef {
  std::variant<std::string, std::uint32_t> ref;
  Loc loc;
  friend bool operator==(const SortRef&, const SortRef&) = default;
};

struct AtomsCarrier {
  std::vector<std::string> atoms;
  friend bool operator==(const AtomsCarrier&, const AtomsCarrier&) = default;
};
struct GfCarrier {
  std::uint32_t p = 2;
  friend bool operator==(const GfCarrier&, const GfCarrier&) = default;
};
struct RationalsCarrier {
  friend bool operator==(const RationalsCarrier&, const RationalsCarrier&) = default;
};
struct VspaceCarrier {
  Ident field;
  std::uint32_t dim = 1;
  friend bool operator==(const VspaceCarrier&, const VspaceCarrier&) = default;
};
using Carrier = std::variant<AtomsCarrier, GfCarrier, RationalsCarrier, VspaceCarrier>;

struct PhylumDecl {
  Ident name;
  Carrier carrier;
  Loc loc;
  friend bool operator==(const PhylumDecl&, const PhylumDecl&) = default;
};

/// builtin [add | mul | smul | scale(r) | ksig]; an empty kind is resolved from the sorts.
struct BuiltinOpBody {
  std::string kind;
  std::optional<Literal> arg;
  friend bool operator==(const BuiltinOpBody&, const BuiltinOpBody&) = default;
};
struct TableOpBody {
  std::vector<Literal> entries;
  friend bool operator==(const TableOpBody&, const TableOpBody&) = default;
};
struct ConstOpBody {
  Literal value;
  friend bool operator==(const ConstOpBody&, const ConstOpBody&) = default;
};
using OpBodyAst = std::variant<BuiltinOpBody, TableOpBody, ConstOpBody>;

struct OpDecl {
  Ident name;
  std::vector<SortRef> inputs;
  SortRef output;
  OpBodyAst body;
  Loc loc;
  friend bool operator==(const OpDecl&, const OpDecl&) = default;
};

struct SortDecl {
  Ident name;
  std::vector<SortRef> prefix;
  std::vector<SortRef> period;
  Loc loc;
  friend bool operator==(const SortDecl&, const SortDecl&) = default;
};

struct SeqDecl {
  Ident name;
  std::vector<Literal> values;
  Loc loc;
  friend bool operator==(const SeqDecl&, const SeqDecl&) = default;
};

enum class PredKind { True, Zero, In, Mod, InY, InX, LeadingCoeffOne, Not, And, Or };

struct Predicate {
  PredKind kind = PredKind::True;
  std::vector<Predicate> children;  // Not: 1, And/Or: 2 or more
  std::vector<Literal> args;        // In: members; Mod: modulus, residue; InY: seq, bound; InX: seq, bound, vector
  Loc loc;
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

struct TableColoring {
  std::vector<std::uint32_t> colors;
  friend bool operator==(const TableColoring&, const TableColoring&) = default;
};
struct PredicateColoring {
  Predicate pred;
  friend bool operator==(const PredicateColoring&, const PredicateColoring&) = default;
};
struct RandomColoring {
  std::uint32_t colors = 2;
  std::optional<std::uint64_t> seed;
  friend bool operator==(const RandomColoring&, const RandomColoring&) = default;
};
struct ConstColoring {
  friend bool operator==(const ConstColoring&, const ConstColoring&) = default;
};

struct ColoringDecl {
  Ident name;
  SortRef phylum;
  std::variant<TableColoring, PredicateColoring, RandomColoring, ConstColoring> spec;
  Loc loc;
  friend bool operator==(const ColoringDecl&, const ColoringDecl&) = default;
};

struct KeyValue {
  Ident key;
  Literal value;
  friend bool operator==(const KeyValue&, const KeyValue&) = default;
};

struct ExperimentDecl {
  Ident name;
  std::vector<KeyValue> entries;
  Loc loc;
  friend bool operator==(const ExperimentDecl&, const ExperimentDecl&) = default;
};

using Decl = std::variant<PhylumDecl, OpDecl, SortDecl, SeqDecl, ColoringDecl, ExperimentDecl>;

struct FileAst {
  std::vector<Decl> decls;
  friend bool operator==(const FileAst&, const FileAst&) = default;
};

}  // namespace ralg::dsl
