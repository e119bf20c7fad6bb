#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ralg/homogeneity.hpp"
#include "ralg/reduction.hpp"

namespace ralg {

inline constexpr SortIndex kScalarSort{0};
inline constexpr SortIndex kVectorSort{1};

/// Phyla F (scalars) and V (vectors); ops +V, +F, *F and scalar multiplication ".".
Signature make_vspace_signature(const Field& f, std::uint32_t dim);
/// One phylum F with +F and *F.
Signature make_field_signature(const Field& f);
/// Phyla F and V; ops +V and f_r (v |-> r.v) for each nonzero r of a prime field.
Signature make_k_signature(const Field& f, std::uint32_t dim);

enum class Verdict { Ramsey, NotRamsey };

struct Classification {
  Verdict verdict = Verdict::Ramsey;
  /// The construction backing the verdict.
  std::string evidence;
  std::string reason;
};

Classification classify_vspace(const Field& f, std::uint32_t dim, const SortWord& e);
std::string to_string(Verdict v);

struct BetaSequence {
  std::vector<BigInt> values;
  std::size_t term_bound = 1;
};

struct BetaBuildOptions {
  /// Candidates run 2, 3, ... up to this value and double afterwards.
  BigInt linear_limit = 4096;
  /// Candidates tried per position before giving up.
  std::size_t budget = 200000;
};

/// Greedy construction; throws ExhaustionError naming the stalled position
/// and the last violated constraint when the budget runs out.
BetaSequence build_beta(std::size_t length, std::size_t term_bound, const BetaBuildOptions& options = {});


struct BetaVerification {
  std::size_t lhs_values = 0;
  std::size_t rhs_values = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Independent check of the inequation f(b0)+g(b1) != f'(b2)*g'(b3) over all
/// terms of size <= bound and all subsequence splits, plus distinctness.
BetaVerification verify_beta(const BetaSequence& beta, std::size_t bound);

struct YWitness {
  OrderlyTerm f;
  OrderlyTerm g;
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
};

/// Bounded decision procedure for v = f(b0) + g(b1) over the beta prefix.
class YMembership {
 public:
  YMembership(BetaSequence beta, std::size_t term_bound);

  std::optional<YWitness> query(const Rational& v) const;
  bool contains(const Rational& v) const { return query(v).has_value(); }

  const BetaSequence& beta() const { return beta_; }
  std::size_t term_bound() const { return bound_; }
  const Signature& signature() const { return sig_; }

 private:
  struct Index;
  BetaSequence beta_;
  std::size_t bound_;
  Signature sig_;
  std::shared_ptr<Index> index_;
};

/// b(i) = beta(i) when e(i) is the scalar sort, beta(i).v otherwise.
SortedPrefix lift_beta(const Signature& vsig, const BetaSequence& beta, const SortWord& e, const Vector& v);

struct ReductionLimits {
  std::size_t length = 2;
  std::size_t max_term_size = 2;
};

struct CounterexampleReport {
  std::size_t reductions = 0;
  std::size_t checks = 0;
  std::size_t reduction_length = 0;
  std::vector<std::string> violations;
  std::vector<std::string> notes;

  bool ok() const { return violations.empty(); }
};

CounterexampleReport verify_field_counterexample(const BetaSequence& beta, const ReductionLimits& limits);

/// X = {alpha.v : alpha in Y}; returns alpha's witness when w lies in X.
std::optional<YWitness> x_membership(const YMembership& y, const Vector& v, const Vector& w);

CounterexampleReport verify_vspace_counterexample(const BetaSequence& beta, const SortWord& e, const Vector& v,
                                                  const ReductionLimits& limits);

/// Coefficients r_1..r_n with t(x) = sum r_i.x_i, read off basis tuples.
/// Throws Error if some coefficient is zero.
std::vector<Scalar> ot_k_coefficients(const Signature& ksig, const OrderlyTerm& t);

/// The K-term sum r_j.x_j with the given nonzero coefficients (left-nested +V).
OrderlyTerm k_term_from_coefficients(const Signature& ksig, const std::vector<Scalar>& coeffs);

struct ZeroTerm {
  std::vector<std::size_t> indices;
  OrderlyTerm term;
  std::vector<Scalar> coefficients;
};

/// For dim+1 vectors of F^dim, a K-term with nonzero coefficients vanishing
/// on a subfamily.
ZeroTerm finite_dim_zero_term(const Signature& ksig, const std::vector<Vector>& vectors);

/// True when the first nonzero coordinate of w is 1.
bool leading_coeff_one(const Field& f, const Vector& w);

CounterexampleReport verify_k_infinite_counterexample(std::uint32_t p, std::size_t num_basis,
                                                      const ReductionLimits& limits);

struct CortehResult {
  bool passes = false;
  std::string details;
  std::optional<SortedPrefix> a;
  std::optional<ReductionWitness> witness;
};

/// Searches a <=_K b whose FR over {+V} alone lies in the common fixed points
/// of the f_r.
CortehResult corteh_gate(const Signature& ksig, const SortedPrefix& b, std::size_t target_len,
                         std::size_t max_term_size, std::size_t fr_max_term_size);

struct LongproofOptions {
  std::size_t target_len = 3;
  HindmanBounds hindman{1, 2};
  ReductionBounds fr{2, 0};
};

struct LongproofResult {
  HomogeneityReport report;
  /// Scalar used for the zero-scalar step and its additive order.
  std::optional<Value> rho;
  std::size_t s = 0;
  std::vector<std::string> stages;
};

/// Finite field vector space, sort in Omega with both phyla: zero-scalar
/// reduction, Hindman search on its vectors, interleaving, then a direct
/// check that the FR set of the result is monochromatic.
LongproofResult longproof_search(const Signature& vsig, const SortedPrefix& b, const SortWord& e, const Coloring& c,
                                 const LongproofOptions& options);

}  // namespace ralg
