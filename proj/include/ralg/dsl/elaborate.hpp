#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ralg/dsl/ast.hpp"
#include "ralg/error.hpp"
#include "ralg/homogeneity.hpp"

namespace ralg::dsl {

/// A semantic error tied to a source location.
class ElaborationError : public Error {
 public:
  explicit ElaborationError(Diagnostic d) : Error(d.message), diag_(std::move(d)) {}
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

struct ExperimentDef {
  std::string name;
  std::string kind;
  std::vector<KeyValue> entries;
  SourceSpan span;

  const KeyValue* find(std::string_view key) const;
};

struct ElaborateOptions {
  /// Seed for random colorings that do not name one.
  std::uint64_t default_seed = 1;
};

/// The resolved contents of one file.
class Program {
 public:
  const Signature& signature() const { return *sig_; }
  std::shared_ptr<const Signature> signature_ptr() const { return sig_; }

  const std::map<std::string, SortWord>& sorts() const { return sorts_; }
  const std::map<std::string, ExperimentDef>& experiments() const { return experiments_; }
  /// Throws ElaborationError when no experiment has that name.
  const ExperimentDef& experiment(std::string_view name) const;

  /// Interprets a literal as an element of phylum s.
  Value interpret(const Literal& lit, SortIndex s) const;

  // Typed access to experiment keys; errors carry the span of the value, or
  // of the experiment when a required key is missing.
  bool has(const ExperimentDef& x, std::string_view key) const { return x.find(key) != nullptr; }
  std::size_t get_size(const ExperimentDef& x, std::string_view key, std::optional<std::size_t> fallback = std::nullopt,
                       std::size_t min = 0) const;
  std::uint64_t get_u64(const ExperimentDef& x, std::string_view key, std::optional<std::uint64_t> fallback) const;
  std::string get_name(const ExperimentDef& x, std::string_view key) const;
  SortWord get_sort(const ExperimentDef& x, std::string_view key) const;
  SortIndex get_phylum(const ExperimentDef& x, std::string_view key) const;
  std::size_t get_op(const ExperimentDef& x, std::string_view key) const;
  std::vector<std::size_t> get_size_list(const ExperimentDef& x, std::string_view key) const;
  std::vector<BigInt> get_int_list(const ExperimentDef& x, std::string_view key) const;
  /// A vector literal read over the given field.
  Vector get_vector(const ExperimentDef& x, std::string_view key, const Field& f) const;
  /// The named sequence sort-checked against e.
  SortedPrefix get_prefix(const ExperimentDef& x, std::string_view key, const SortWord& e) const;
  SortIndex coloring_phylum(const ExperimentDef& x, std::string_view key) const;
  /// The named coloring; seed_override replaces the seed of a random coloring.
  Coloring get_coloring(const ExperimentDef& x, std::string_view key,
                        std::optional<std::uint64_t> seed_override = std::nullopt) const;
  bool coloring_is_random(const ExperimentDef& x, std::string_view key) const;
  /// Seed a random coloring uses when not overridden.
  std::uint64_t coloring_seed(const ExperimentDef& x, std::string_view key) const;

  /// True when phylum 0 is a field and phylum 1 a vector space over it.
  bool is_vspace_layout() const;

 private:
  friend struct Elaborator;

  struct SeqDef {
    std::vector<Literal> values;
    SourceSpan span;
  };
  struct ColoringDef {
    SortIndex phylum;
    ColoringDecl decl;
  };

  const KeyValue& require(const ExperimentDef& x, std::string_view key) const;
  Coloring build_coloring(const std::string& name, const ColoringDef& c, std::optional<std::uint64_t> seed) const;
  std::function<bool(const Value&)> build_predicate(const Predicate& p, SortIndex s) const;

  std::shared_ptr<const Signature> sig_ = std::make_shared<Signature>();
  std::map<std::string, SortWord> sorts_;
  std::map<std::string, SeqDef> seqs_;
  std::map<std::string, ColoringDef> colorings_;
  std::map<std::string, ExperimentDef> experiments_;
  std::uint64_t default_seed_ = 1;
};

struct ElaborateResult {
  std::optional<Program> program;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value() && diagnostics.empty(); }
};

ElaborateResult elaborate(const FileAst& ast, const ElaborateOptions& options = {});

/// Experiment kinds understood by elaborate, with the keys each accepts.
const std::map<std::string, std::vector<std::string>>& experiment_kinds();

}  // namespace ralg::dsl
