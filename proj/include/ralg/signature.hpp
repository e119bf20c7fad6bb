#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ralg/field.hpp"
#include "ralg/sort_index.hpp"
#include "ralg/value.hpp"

namespace ralg {

struct FiniteEnumerated {
  std::vector<std::string> atoms;
};
struct PrimeField {
  std::uint32_t p = 2;
};
struct RationalField {};
struct VectorSpace {
  SortIndex field;  // must name a PrimeField or RationalField phylum
  std::uint32_t dim = 1;
};

using PhylumKind = std::variant<FiniteEnumerated, PrimeField, RationalField, VectorSpace>;

struct Phylum {
  std::string name;
  PhylumKind kind;
};

/// Built-in exact operations of fields and vector spaces.
enum class Builtin {
  VectorAdd,  // V V -> V
  FieldAdd,   // F F -> F
  FieldMul,   // F F -> F
  ScalarMul,  // F V -> V
  Scale,      // V -> V, v |-> r.v for a fixed scalar r
};

/// Lookup table over finite input phyla. Entry k holds the image of the
/// input tuple whose element indices spell k in mixed radix (first input most
/// significant).
struct TableBody {
  std::vector<Value> outputs;
};
struct ConstantBody {
  Value value;
};
struct BuiltinBody {
  Builtin kind = Builtin::VectorAdd;
  Scalar factor;  // used by Scale only
};
struct CustomBody {
  std::function<Value(std::span<const Value>)> fn;
};

using OpBody = std::variant<TableBody, ConstantBody, BuiltinBody, CustomBody>;

struct OperationDef {
  std::string name;
  std::vector<SortIndex> inputs;
  SortIndex output;
  OpBody body;

  std::size_t arity() const { return inputs.size(); }
};

/// A many-sorted algebra ((A_xi)_xi, F). Construction performs no checks; call
/// validate_signature before trusting an externally supplied signature.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<Phylum> phyla, std::vector<OperationDef> ops)
      : phyla_(std::move(phyla)), ops_(std::move(ops)) {}

  const std::vector<Phylum>& phyla() const { return phyla_; }
  const std::vector<OperationDef>& ops() const { return ops_; }
  std::size_t num_phyla() const { return phyla_.size(); }
  std::size_t num_ops() const { return ops_.size(); }

  const Phylum& phylum(SortIndex s) const;
  const OperationDef& op(std::size_t i) const;
  bool valid_sort(SortIndex s) const { return s.id < phyla_.size(); }

  std::optional<SortIndex> find_phylum(std::string_view name) const;
  std::optional<std::size_t> find_op(std::string_view name) const;
  /// First op of the given builtin kind whose output is `out`.
  std::optional<std::size_t> find_builtin(Builtin kind, SortIndex out) const;

  bool is_field(SortIndex s) const;
  bool is_vector_space(SortIndex s) const;
  /// The field of a field phylum, or the scalar field of a vector phylum.
  Field field_of(SortIndex s) const;
  std::uint32_t dim_of(SortIndex s) const;

  /// Number of elements of a finite phylum; nullopt for infinite phyla.
  std::optional<std::size_t> cardinality(SortIndex s) const;
  /// Enumeration index of v within its finite phylum.
  std::size_t element_index(const Value& v) const;
  Value element_at(SortIndex s, std::size_t index) const;
  std::vector<Value> elements(SortIndex s) const;

  bool contains(SortIndex s, const Value& v) const;

  Value zero_vector(SortIndex s) const;
  Value make_scalar(SortIndex s, std::int64_t n) const;
  Value make_vector(SortIndex s, const std::vector<std::int64_t>& coords) const;

  /// Apply op i. Throws PreconditionError on arity or sort mismatch.
  Value apply(std::size_t i, std::span<const Value> args) const;
  /// Apply op i without re-checking argument sorts.
  Value apply_unchecked(std::size_t i, std::span<const Value> args) const;

  std::string format(const Value& v) const;

 private:
  std::vector<Phylum> phyla_;
  std::vector<OperationDef> ops_;
};

/// Every violated structural invariant; empty when the signature is well formed.
std::vector<std::string> validate_signature(const Signature& sig);

/// The subsignature keeping all phyla and only the listed ops.
Signature restrict_ops(const Signature& sig, const std::vector<std::size_t>& keep);

}  // namespace ralg
