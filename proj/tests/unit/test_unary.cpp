#include <gtest/gtest.h>

#include <random>

#include "ralg/error.hpp"
#include "ralg/unary.hpp"

using namespace ralg;

namespace {

bool partition_ok(const std::vector<std::size_t>& T, const ThreePartition& p) {
  if (p.cell.size() != T.size()) return false;
  std::size_t total = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    total += p.parts[i].size();
    for (std::size_t x : p.parts[i])
      if (p.cell[x] != i) return false;
  }
  if (total != T.size()) return false;
  for (std::size_t x = 0; x < T.size(); ++x)
    if (p.cell[x] > 2 || p.cell[T[x]] == p.cell[x]) return false;
  return true;
}

UnaryAlgebra make_alg(std::size_t n, std::vector<std::vector<std::size_t>> ops) {
  UnaryAlgebra alg;
  for (std::size_t i = 0; i < n; ++i) alg.carrier.push_back(Value::atom(SortIndex{0}, static_cast<std::uint32_t>(i)));
  alg.ops = std::move(ops);
  return alg;
}

// Elements that reach a common fixed point, by iterating reachability to a fixpoint.
std::vector<bool> reach_oracle(const UnaryAlgebra& alg) {
  const std::size_t n = alg.carrier.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    r[i][i] = true;
    for (const auto& f : alg.ops) r[i][f[i]] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  std::vector<bool> out(n, false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      bool fixed = true;
      for (const auto& f : alg.ops) fixed = fixed && f[j] == j;
      if (fixed && r[i][j]) out[i] = true;
    }
  return out;
}

}  // namespace

TEST(Katetov, AllSmallMaps) {
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<std::size_t> T(n, 0);
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= n - 1;
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      for (std::size_t x = 0; x < n; ++x, c /= n - 1) {
        const std::size_t r = c % (n - 1);
        T[x] = r >= x ? r + 1 : r;
      }
      const ThreePartition p = katetov_partition(T);
      ASSERT_TRUE(partition_ok(T, p));
      ASSERT_TRUE(verify_three_partition(T, p));
    }
  }
}

TEST(Katetov, RandomLargeMaps) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto T = random_fixed_point_free_map(5000, seed);
    for (std::size_t x = 0; x < T.size(); ++x) ASSERT_NE(T[x], x);
    EXPECT_TRUE(partition_ok(T, katetov_partition(T)));
  }
}

TEST(Katetov, OddCycleNeedsThreeColors) {
  const std::vector<std::size_t> T{1, 2, 0};
  const ThreePartition p = katetov_partition(T);
  EXPECT_TRUE(partition_ok(T, p));
  EXPECT_EQ(std::set<std::uint8_t>(p.cell.begin(), p.cell.end()).size(), 3u);
}

TEST(Katetov, FixedPointIsRejected) {
  EXPECT_THROW(katetov_partition({0, 1, 2}), PreconditionError);
  EXPECT_THROW(katetov_partition({1, 1}), PreconditionError);
  EXPECT_THROW(random_fixed_point_free_map(1, 0), PreconditionError);
}

TEST(Katetov, VerifierCatchesBadPartitions) {
  const std::vector<std::size_t> T{1, 0, 0};
  ThreePartition p;
  p.cell = {0, 0, 1};
  p.parts = {std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{2}, {}};
  EXPECT_FALSE(verify_three_partition(T, p));
}

TEST(Unary, ClassificationMatchesReachabilityOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const std::size_t k = rng() % 3;
    std::vector<std::vector<std::size_t>> ops(k, std::vector<std::size_t>(n));
    for (auto& f : ops)
      for (auto& y : f) y = rng() % n;
    const UnaryAlgebra alg = make_alg(n, ops);
    ASSERT_TRUE(validate_unary(alg).empty());
    const auto oracle = reach_oracle(alg);
    const UnaryClassification c = unary_ramsey_classification(alg);
    std::set<Value> unreachable(c.unreachable.begin(), c.unreachable.end());
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(!oracle[i], unreachable.contains(alg.carrier[i]));
    ASSERT_EQ(c.is_ramsey, std::all_of(oracle.begin(), oracle.end(), [](bool b) { return b; }));
    ASSERT_EQ(c.fixed, fixed_point_set(alg));
  }
}

TEST(Unary, NoOperationsMeansEverythingFixed) {
  const UnaryClassification c = unary_ramsey_classification(make_alg(3, {}));
  EXPECT_TRUE(c.is_ramsey);
  EXPECT_EQ(c.fixed.size(), 3u);
}

TEST(Unary, ValidationCatchesPartialOps) {
  EXPECT_FALSE(validate_unary(make_alg(3, {{0, 1}})).empty());
  EXPECT_FALSE(validate_unary(make_alg(2, {{0, 5}})).empty());
}

TEST(Premprop, GuaranteeHoldsOnRandomAlgebras) {
  std::mt19937_64 rng(5);
  std::size_t checked = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t n = 1 + rng() % 7;
    const std::size_t k = 1 + rng() % 2;
    std::vector<std::vector<std::size_t>> ops(k, std::vector<std::size_t>(n));
    for (auto& f : ops)
      for (auto& y : f) y = rng() % n;
    const UnaryAlgebra alg = make_alg(n, ops);
    const std::vector<std::size_t> S = fixed_point_indices(alg);
    const std::size_t a0 = rng() % n;
    const ThreePartition q = premprop_partition(alg, S, a0);
    ASSERT_TRUE(verify_premprop_guarantee(alg, S, q));
    // independent scan of the guarantee
    for (std::size_t a = 0; a < n; ++a) {
      if (std::find(S.begin(), S.end(), a) != S.end()) continue;
      bool moved = false;
      for (const auto& f : ops) moved = moved || q.cell[f[a]] != q.cell[a];
      ASSERT_TRUE(moved);
    }
    ++checked;
  }
  EXPECT_EQ(checked, 3000u);
}

TEST(Premprop, RequiresSToContainUnmovedPoints) {
  const UnaryAlgebra alg = make_alg(3, {{0, 2, 1}});
  EXPECT_THROW(premprop_partition(alg, {}, 1), PreconditionError);
  EXPECT_NO_THROW(premprop_partition(alg, {0}, 1));
}
