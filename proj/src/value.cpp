#include "ralg/value.hpp"

#include <algorithm>

#include "ralg/error.hpp"

namespace ralg {

Value Value::atom(SortIndex phylum, std::uint32_t ordinal) { return Value(phylum, Atom{ordinal}); }
Value Value::scalar(SortIndex phylum, Scalar s) { return Value(phylum, std::move(s)); }
Value Value::vector(SortIndex phylum, Vector coords) { return Value(phylum, std::move(coords)); }

const Atom& Value::as_atom() const {
  if (!is_atom()) throw PreconditionError("value is not an atom");
  return std::get<Atom>(data_);
}

const Scalar& Value::as_scalar() const {
  if (!is_scalar()) throw PreconditionError("value is not a scalar");
  return std::get<Scalar>(data_);
}

const Vector& Value::as_vector() const {
  if (!is_vector()) throw PreconditionError("value is not a vector");
  return std::get<Vector>(data_);
}

bool operator==(const Value& a, const Value& b) { return a.phylum_ == b.phylum_ && a.data_ == b.data_; }

bool operator<(const Value& a, const Value& b) {
  if (a.phylum_ != b.phylum_) return a.phylum_ < b.phylum_;
  if (a.data_.index() != b.data_.index()) return a.data_.index() < b.data_.index();
  if (a.is_atom()) return a.as_atom() < b.as_atom();
  if (a.is_scalar()) return scalar_less(a.as_scalar(), b.as_scalar());
  const Vector& u = a.as_vector();
  const Vector& w = b.as_vector();
  return std::lexicographical_compare(u.begin(), u.end(), w.begin(), w.end(), scalar_less);
}

namespace {

void combine(std::size_t& seed, std::size_t h) { seed ^= h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2); }

std::size_t hash_scalar(const Scalar& s) {
  if (const auto* r = std::get_if<Residue>(&s)) return std::hash<std::uint32_t>{}(r->value);
  return std::hash<Rational>{}(std::get<Rational>(s));
}

}  // namespace

std::size_t hash_value(const Value& v) {
  std::size_t seed = std::hash<std::uint32_t>{}(v.phylum().id);
  if (v.is_atom()) {
    combine(seed, v.as_atom().ordinal);
  } else if (v.is_scalar()) {
    combine(seed, hash_scalar(v.as_scalar()));
  } else {
    for (const Scalar& s : v.as_vector()) combine(seed, hash_scalar(s));
  }
  return seed;
}

}  // namespace ralg
