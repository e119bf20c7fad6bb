#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ralg {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A residue class in GF(p); the modulus lives in the owning Field.
struct Residue {
  std::uint32_t value = 0;

  friend bool operator==(const Residue&, const Residue&) = default;
  friend auto operator<=>(const Residue&, const Residue&) = default;
};

/// An exact field element: a GF(p) residue or an arbitrary-precision rational.
using Scalar = std::variant<Residue, Rational>;

bool is_prime(std::uint64_t n);

/// Exact arithmetic in a prime field GF(p) or in the rationals.
class Field {
 public:
  static Field prime(std::uint32_t p);
  static Field rationals();

  bool is_finite() const { return p_ != 0; }
  /// p for GF(p), 0 for the rationals.
  std::uint32_t characteristic() const { return p_; }

  Scalar zero() const;
  Scalar one() const;
  Scalar from_integer(std::int64_t n) const;
  Scalar from_rational(const Rational& q) const;

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  /// Throws PreconditionError on zero.
  Scalar inverse(const Scalar& a) const;

  bool is_zero(const Scalar& a) const;
  bool is_one(const Scalar& a) const;
  bool contains(const Scalar& a) const;

  /// Least s >= 1 with s*a = 0; 0 when no such s exists (nonzero rationals).
  std::uint32_t additive_order(const Scalar& a) const;

  /// All elements of GF(p) in residue order. Throws for the rationals.
  std::vector<Scalar> elements() const;

  std::string name() const;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  explicit Field(std::uint32_t p) : p_(p) {}
  std::uint32_t residue(const Scalar& a) const;
  const Rational& rational(const Scalar& a) const;

  std::uint32_t p_ = 0;
};

std::string to_string(const Scalar& s);
bool scalar_less(const Scalar& a, const Scalar& b);

}  // namespace ralg
