#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "ralg/field.hpp"
#include "ralg/sort_index.hpp"

namespace ralg {

/// The ordinal of an element of a finite enumerated phylum.
struct Atom {
  std::uint32_t ordinal = 0;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

using Vector = std::vector<Scalar>;

/// An element of one phylum. The phylum id is part of the value, so values of
/// distinct phyla never compare equal.
class Value {
 public:
  static Value atom(SortIndex phylum, std::uint32_t ordinal);
  static Value scalar(SortIndex phylum, Scalar s);
  static Value vector(SortIndex phylum, Vector coords);

  SortIndex phylum() const { return phylum_; }

  bool is_atom() const { return std::holds_alternative<Atom>(data_); }
  bool is_scalar() const { return std::holds_alternative<Scalar>(data_); }
  bool is_vector() const { return std::holds_alternative<Vector>(data_); }

  const Atom& as_atom() const;
  const Scalar& as_scalar() const;
  const Vector& as_vector() const;

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator<(const Value& a, const Value& b);

 private:
  Value(SortIndex phylum, std::variant<Atom, Scalar, Vector> data)
      : phylum_(phylum), data_(std::move(data)) {}

  SortIndex phylum_;
  std::variant<Atom, Scalar, Vector> data_;
};

std::size_t hash_value(const Value& v);

struct ValueHash {
  std::size_t operator()(const Value& v) const { return hash_value(v); }
};

}  // namespace ralg
