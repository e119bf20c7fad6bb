#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ralg/error.hpp"
#include "ralg/vspace.hpp"

using namespace ralg;

namespace {

std::vector<std::vector<Value>> all_tuples(const Signature& sig, const std::vector<SortIndex>& sorts) {
  std::vector<std::vector<Value>> out{{}};
  for (SortIndex s : sorts) {
    std::vector<std::vector<Value>> next;
    for (const auto& t : out)
      for (const Value& v : sig.elements(s)) {
        next.push_back(t);
        next.back().push_back(v);
      }
    out = std::move(next);
  }
  return out;
}

// Sums of every subset of the vector arguments, the empty subset giving O.
std::set<Value> subset_sums(const Signature& sig, const std::vector<Value>& args) {
  std::vector<Value> vecs;
  for (const Value& v : args)
    if (v.phylum() == kVectorSort) vecs.push_back(v);
  const Field f = sig.field_of(kVectorSort);
  std::set<Value> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << vecs.size()); ++mask) {
    Vector acc(sig.dim_of(kVectorSort), f.zero());
    for (std::size_t i = 0; i < vecs.size(); ++i)
      if (mask & (std::size_t{1} << i))
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] = f.add(acc[k], vecs[i].as_vector()[k]);
    out.insert(Value::vector(kVectorSort, acc));
  }
  return out;
}

std::set<Rational> brute_y(const BetaSequence& beta, std::size_t bound) {
  const Signature fsig = make_field_signature(Field::rationals());
  const auto terms = enumerate_terms(fsig, SortIndex{0}, bound + 1, bound);
  const std::size_t n = beta.values.size();
  auto term_values = [&](const std::vector<std::size_t>& idx) {
    std::vector<Rational> out;
    std::vector<Value> args;
    for (std::size_t i : idx) args.push_back(Value::scalar(SortIndex{0}, Rational(beta.values[i])));
    for (const OrderlyTerm& t : terms)
      if (t.arity() == idx.size()) out.push_back(std::get<Rational>(evaluate(fsig, t, args).as_scalar()));
    return out;
  };
  std::set<Rational> out;
  for (std::size_t lm = 1; lm < (std::size_t{1} << n); ++lm)
    for (std::size_t rm = 1; rm < (std::size_t{1} << n); ++rm) {
      std::vector<std::size_t> l, r;
      for (std::size_t i = 0; i < n; ++i) {
        if (lm & (std::size_t{1} << i)) l.push_back(i);
        if (rm & (std::size_t{1} << i)) r.push_back(i);
      }
      if (l.back() >= r.front() || l.size() > bound + 1 || r.size() > bound + 1) continue;
      for (const Rational& x : term_values(l))
        for (const Rational& y : term_values(r)) out.insert(x + y);
    }
  return out;
}

}  // namespace

TEST(TypeFacts, ScalarDomainsGiveScalarsAndVectorsEndLast) {
  const Signature sig = make_vspace_signature(Field::prime(3), 2);
  for (SortIndex s : {kScalarSort, kVectorSort})
    for (const OrderlyTerm& t : enumerate_terms(sig, s, 4, 4)) {
      const std::vector<SortIndex> in = t.inputs();
      const bool any_vector = std::find(in.begin(), in.end(), kVectorSort) != in.end();
      if (!any_vector) {
        EXPECT_EQ(t.output(), kScalarSort);
      } else {
        EXPECT_EQ(t.output(), kVectorSort);
        EXPECT_EQ(in.back(), kVectorSort);
      }
    }
}

TEST(TypeFacts, ZeroScalarsGiveSubsetSums) {
  const Signature sig = make_vspace_signature(Field::prime(2), 2);
  const Value zero = Value::scalar(kScalarSort, Residue{0});
  for (SortIndex s : {kScalarSort, kVectorSort})
    for (const OrderlyTerm& t : enumerate_terms(sig, s, 3, 3))
      for (auto args : all_tuples(sig, t.inputs())) {
        bool zero_scalars = true;
        for (const Value& v : args) zero_scalars = zero_scalars && (v.phylum() != kScalarSort || v == zero);
        if (!zero_scalars) continue;
        const Value r = evaluate(sig, t, args);
        if (s == kScalarSort) {
          EXPECT_EQ(r, zero);
        } else {
          EXPECT_TRUE(subset_sums(sig, args).contains(r)) << to_string(sig, t);
        }
      }
}

TEST(KTerms, CoefficientsAreExactlyNonzeroTuples) {
  const Field f = Field::prime(3);
  const Signature ksig = make_k_signature(f, 2);
  std::set<std::vector<std::uint32_t>> got;
  for (const OrderlyTerm& t : enumerate_terms(ksig, kVectorSort, 2, 3)) {
    std::vector<std::uint32_t> c;
    for (const Scalar& s : ot_k_coefficients(ksig, t)) c.push_back(std::get<Residue>(s).value);
    got.insert(c);
  }
  std::set<std::vector<std::uint32_t>> expect;
  for (std::uint32_t a = 1; a < 3; ++a) {
    expect.insert({a});
    for (std::uint32_t b = 1; b < 3; ++b) expect.insert({a, b});
  }
  EXPECT_EQ(got, expect);
}

TEST(KTerms, CoefficientRoundTrip) {
  const Field f = Field::prime(5);
  const Signature ksig = make_k_signature(f, 2);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Scalar> c(1 + rng() % 4);
    for (auto& x : c) x = Residue{static_cast<std::uint32_t>(1 + rng() % 4)};
    const OrderlyTerm t = k_term_from_coefficients(ksig, c);
    EXPECT_EQ(ot_k_coefficients(ksig, t), c);
  }
  EXPECT_THROW(k_term_from_coefficients(ksig, {Residue{0}}), PreconditionError);
  EXPECT_THROW(k_term_from_coefficients(ksig, {}), PreconditionError);
}

TEST(KTerms, ZeroTermVanishes) {
  std::mt19937_64 rng(2);
  for (std::uint32_t p : {3u, 5u}) {
    const Field f = Field::prime(p);
    for (std::uint32_t dim = 1; dim <= 3; ++dim) {
      const Signature ksig = make_k_signature(f, dim);
      for (int trial = 0; trial < 30; ++trial) {
        std::vector<Vector> vs(dim + 1, Vector(dim));
        for (auto& v : vs)
          for (auto& x : v) x = Residue{static_cast<std::uint32_t>(rng() % p)};
        const ZeroTerm z = finite_dim_zero_term(ksig, vs);
        std::vector<Value> args;
        for (std::size_t i : z.indices) args.push_back(Value::vector(kVectorSort, vs[i]));
        EXPECT_EQ(evaluate(ksig, z.term, args), ksig.zero_vector(kVectorSort));
        EXPECT_EQ(ot_k_coefficients(ksig, z.term), z.coefficients);
        for (const Scalar& c : z.coefficients) EXPECT_FALSE(f.is_zero(c));
        EXPECT_TRUE(std::is_sorted(z.indices.begin(), z.indices.end()));
      }
    }
  }
  const Signature ksig = make_k_signature(Field::prime(3), 2);
  EXPECT_THROW(finite_dim_zero_term(ksig, {Vector{Residue{1}, Residue{0}}}), PreconditionError);
}

TEST(KTerms, LeadingCoefficient) {
  const Field f = Field::prime(3);
  EXPECT_TRUE(leading_coeff_one(f, {Residue{0}, Residue{1}, Residue{2}}));
  EXPECT_FALSE(leading_coeff_one(f, {Residue{0}, Residue{2}, Residue{1}}));
  EXPECT_FALSE(leading_coeff_one(f, {Residue{0}, Residue{0}}));
}

TEST(Beta, SmallSequencePassesIndependentCheck) {
  const BetaSequence beta = build_beta(6, 2);
  ASSERT_EQ(beta.values.size(), 6u);
  EXPECT_TRUE(verify_beta(beta, 2).ok());
  for (const BigInt& v : beta.values) EXPECT_GE(v, 2);
}

TEST(Beta, StartingAtOneFails) {
  // 2 + 3 = 1 * (2 + 3)
  const BetaSequence bad{{1, 2, 3}, 1};
  EXPECT_FALSE(verify_beta(bad, 1).ok());
  const BetaSequence dup{{5, 5}, 1};
  EXPECT_FALSE(verify_beta(dup, 1).ok());
}

TEST(Beta, ExhaustionIsReported) {
  BetaBuildOptions tiny;
  tiny.budget = 1;
  EXPECT_THROW(build_beta(6, 3, tiny), ExhaustionError);
}

TEST(YSet, MatchesBruteForce) {
  const BetaSequence beta = build_beta(5, 2);
  const YMembership y(beta, 2);
  const std::set<Rational> oracle = brute_y(beta, 2);
  for (const Rational& v : oracle) {
    const auto w = y.query(v);
    ASSERT_TRUE(w.has_value()) << v;
    const Signature& fsig = y.signature();
    std::vector<Value> l, r;
    for (std::size_t i : w->left) l.push_back(Value::scalar(SortIndex{0}, Rational(beta.values[i])));
    for (std::size_t i : w->right) r.push_back(Value::scalar(SortIndex{0}, Rational(beta.values[i])));
    EXPECT_LT(w->left.back(), w->right.front());
    EXPECT_EQ(std::get<Rational>(evaluate(fsig, w->f, l).as_scalar()) +
                  std::get<Rational>(evaluate(fsig, w->g, r).as_scalar()),
              v);
  }
  for (long k = -50; k < 400; ++k)
    EXPECT_EQ(y.contains(Rational(k)), oracle.contains(Rational(k))) << k;
  EXPECT_EQ(y.contains(Rational(1, 2)), oracle.contains(Rational(1, 2)));
}

TEST(YSet, XMembershipScalesY) {
  const BetaSequence beta = build_beta(4, 2);
  const YMembership y(beta, 2);
  const Vector v{Rational(1), Rational(2)};
  const Rational a = beta.values[0] + beta.values[1];
  ASSERT_TRUE(y.contains(a));
  EXPECT_TRUE(x_membership(y, v, {Scalar(a), Scalar(Rational(2) * a)}).has_value());
  EXPECT_FALSE(x_membership(y, v, {Scalar(a), Scalar(Rational(3) * a)}).has_value());
}

TEST(Lift, FollowsTheSort) {
  const Signature qsig = make_vspace_signature(Field::rationals(), 2);
  const BetaSequence beta = build_beta(4, 1);
  const SortWord e({}, {kScalarSort, kVectorSort});
  const SortedPrefix b = lift_beta(qsig, beta, e, {Rational(1), Rational(0)});
  ASSERT_EQ(b.values.size(), 4u);
  EXPECT_TRUE(validate_prefix(qsig, b).empty());
  EXPECT_EQ(b.values[0], Value::scalar(kScalarSort, Rational(beta.values[0])));
  EXPECT_EQ(b.values[1], qsig.make_vector(kVectorSort, {static_cast<std::int64_t>(beta.values[1]), 0}));
  EXPECT_THROW(lift_beta(qsig, beta, e, {Rational(0), Rational(0)}), PreconditionError);
}

TEST(Counterexamples, SmallBoundsHaveNoViolations) {
  const BetaSequence beta = build_beta(5, 2);
  const CounterexampleReport field = verify_field_counterexample(beta, {2, 2});
  EXPECT_TRUE(field.ok());
  EXPECT_GT(field.reductions, 0u);
  const CounterexampleReport vs =
      verify_vspace_counterexample(beta, SortWord({}, {kScalarSort, kVectorSort}), {Rational(1), Rational(0)}, {2, 2});
  EXPECT_TRUE(vs.ok());
  EXPECT_GT(vs.reductions, 0u);
  const CounterexampleReport vhead =
      verify_vspace_counterexample(beta, SortWord({}, {kVectorSort, kScalarSort}), {Rational(0), Rational(1)}, {2, 2});
  EXPECT_TRUE(vhead.ok());
  const CounterexampleReport k = verify_k_infinite_counterexample(3, 4, {2, 2});
  EXPECT_TRUE(k.ok());
  EXPECT_GT(k.reductions, 0u);
}

TEST(Counterexamples, Preconditions) {
  const BetaSequence beta = build_beta(4, 1);
  EXPECT_THROW(verify_field_counterexample(beta, {2, 2}), PreconditionError);
  EXPECT_THROW(verify_k_infinite_counterexample(2, 3, {2, 2}), PreconditionError);
  EXPECT_THROW(verify_vspace_counterexample(build_beta(4, 2), SortWord({kScalarSort}, {kVectorSort}),
                                            {Rational(1), Rational(0)}, {2, 2}),
               PreconditionError);
}

TEST(Classify, VerdictTable) {
  const Field gf = Field::prime(5);
  const Field q = Field::rationals();
  const SortWord alt({}, {kScalarSort, kVectorSort});
  const SortWord valt({}, {kVectorSort, kScalarSort});
  const SortWord vec = SortWord::constant(kVectorSort);
  const SortWord sca = SortWord::constant(kScalarSort);
  const SortWord rigid({kScalarSort}, {kVectorSort});
  struct Row {
    Field f;
    SortWord e;
    Verdict v;
    std::string evidence;
  };
  const std::vector<Row> rows{
      {gf, alt, Verdict::Ramsey, "zero_scalar_reduction"},
      {gf, valt, Verdict::Ramsey, "zero_scalar_reduction+hindman_search"},
      {gf, vec, Verdict::Ramsey, "hindman_search"},
      {gf, sca, Verdict::Ramsey, "zero_scalar_reduction"},
      {gf, rigid, Verdict::Ramsey, "sort_rigidity"},
      {q, alt, Verdict::NotRamsey, "verify_vspace_counterexample"},
      {q, valt, Verdict::NotRamsey, "verify_vspace_counterexample"},
      {q, vec, Verdict::Ramsey, "hindman_search"},
      {q, sca, Verdict::NotRamsey, "verify_field_counterexample"},
      {q, rigid, Verdict::Ramsey, "sort_rigidity"},
  };
  for (const Row& r : rows) {
    const Classification c = classify_vspace(r.f, 2, r.e);
    EXPECT_EQ(c.verdict, r.v) << r.f.name() << " " << r.e.to_string();
    EXPECT_EQ(c.evidence, r.evidence) << r.f.name() << " " << r.e.to_string();
  }
  EXPECT_EQ(classify_vspace(Field::prime(2), 3, alt).verdict, Verdict::Ramsey);
  EXPECT_THROW(classify_vspace(gf, 0, alt), PreconditionError);
}

TEST(Corteh, FindsReductionInsideFixedPoints) {
  const Signature ksig = make_k_signature(Field::prime(3), 2);
  SortedPrefix b{{}, SortWord::constant(kVectorSort)};
  for (const auto& c : std::vector<std::vector<std::int64_t>>{{1, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 0}, {0, 2}})
    b.values.push_back(ksig.make_vector(kVectorSort, c));
  const CortehResult r = corteh_gate(ksig, b, 1, 3, 2);
  ASSERT_TRUE(r.passes) << r.details;
  ASSERT_TRUE(r.a && r.witness);
  EXPECT_TRUE(check_witness(ksig, *r.a, b, *r.witness).ok);
  EXPECT_THROW(corteh_gate(make_vspace_signature(Field::prime(3), 2), b, 1, 2, 2), PreconditionError);
}
