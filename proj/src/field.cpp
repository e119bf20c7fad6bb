#include "ralg/field.hpp"

#include <sstream>

#include "ralg/error.hpp"

namespace ralg {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field Field::prime(std::uint32_t p) {
  if (!is_prime(p)) throw PreconditionError("GF(" + std::to_string(p) + "): modulus is not prime");
  return Field(p);
}

Field Field::rationals() { return Field(0); }

std::uint32_t Field::residue(const Scalar& a) const {
  const auto* r = std::get_if<Residue>(&a);
  if (r == nullptr || r->value >= p_) throw PreconditionError("scalar " + to_string(a) + " is not in " + name());
  return r->value;
}

const Rational& Field::rational(const Scalar& a) const {
  const auto* q = std::get_if<Rational>(&a);
  if (q == nullptr) throw PreconditionError("scalar " + to_string(a) + " is not a rational");
  return *q;
}

Scalar Field::zero() const { return from_integer(0); }
Scalar Field::one() const { return from_integer(1); }

Scalar Field::from_integer(std::int64_t n) const {
  if (!is_finite()) return Rational(n);
  std::int64_t r = n % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return Residue{static_cast<std::uint32_t>(r)};
}

Scalar Field::from_rational(const Rational& q) const {
  if (!is_finite()) return q;
  BigInt num = boost::multiprecision::numerator(q) % p_;
  BigInt den = boost::multiprecision::denominator(q) % p_;
  if (num < 0) num += p_;
  if (den == 0) throw PreconditionError("denominator vanishes in " + name());
  Scalar n = Residue{num.convert_to<std::uint32_t>()};
  Scalar d = Residue{den.convert_to<std::uint32_t>()};
  return mul(n, inverse(d));
}

Scalar Field::add(const Scalar& a, const Scalar& b) const {
  if (is_finite()) return Residue{static_cast<std::uint32_t>((std::uint64_t{residue(a)} + residue(b)) % p_)};
  return Rational(rational(a) + rational(b));
}

Scalar Field::sub(const Scalar& a, const Scalar& b) const { return add(a, neg(b)); }

Scalar Field::mul(const Scalar& a, const Scalar& b) const {
  if (is_finite()) return Residue{static_cast<std::uint32_t>((std::uint64_t{residue(a)} * residue(b)) % p_)};
  return Rational(rational(a) * rational(b));
}

Scalar Field::neg(const Scalar& a) const {
  if (is_finite()) {
    std::uint32_t r = residue(a);
    return Residue{r == 0 ? 0 : p_ - r};
  }
  return Rational(-rational(a));
}

Scalar Field::inverse(const Scalar& a) const {
  if (is_zero(a)) throw PreconditionError("inverse of zero in " + name());
  if (!is_finite()) return Rational(1 / rational(a));
  // Fermat: a^(p-2)
  std::uint64_t base = residue(a), result = 1;
  for (std::uint64_t e = p_ - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p_;
    base = base * base % p_;
  }
  return Residue{static_cast<std::uint32_t>(result)};
}

bool Field::is_zero(const Scalar& a) const {
  if (is_finite()) return residue(a) == 0;
  return rational(a) == 0;
}

bool Field::is_one(const Scalar& a) const {
  if (is_finite()) return residue(a) == 1 % p_;
  return rational(a) == 1;
}

bool Field::contains(const Scalar& a) const {
  if (is_finite()) {
    const auto* r = std::get_if<Residue>(&a);
    return r != nullptr && r->value < p_;
  }
  return std::holds_alternative<Rational>(a);
}

std::uint32_t Field::additive_order(const Scalar& a) const {
  if (is_zero(a)) return 1;
  return is_finite() ? p_ : 0;
}

std::vector<Scalar> Field::elements() const {
  if (!is_finite()) throw PreconditionError("the rationals cannot be enumerated");
  std::vector<Scalar> out;
  out.reserve(p_);
  for (std::uint32_t r = 0; r < p_; ++r) out.emplace_back(Residue{r});
  return out;
}

std::string Field::name() const { return is_finite() ? "GF(" + std::to_string(p_) + ")" : "Q"; }

std::string to_string(const Scalar& s) {
  if (const auto* r = std::get_if<Residue>(&s)) return std::to_string(r->value);
  std::ostringstream os;
  os << std::get<Rational>(s);
  return os.str();
}

bool scalar_less(const Scalar& a, const Scalar& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  if (const auto* r = std::get_if<Residue>(&a)) return r->value < std::get<Residue>(b).value;
  return std::get<Rational>(a) < std::get<Rational>(b);
}

}  // namespace ralg
