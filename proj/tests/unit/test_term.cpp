#include <gtest/gtest.h>

#include <map>
#include <random>

#include "ralg/error.hpp"
#include "ralg/term.hpp"
#include "ralg/vspace.hpp"

using namespace ralg;

namespace {

// Number of orderly trees by (output sort, size, arity), by direct recursion on the grammar.
using Counts = std::vector<std::vector<std::vector<std::uint64_t>>>;

Counts count_trees(const Signature& sig, std::size_t max_size, std::size_t max_arity) {
  const std::size_t n = sig.num_phyla();
  Counts c(n, std::vector<std::vector<std::uint64_t>>(max_size + 1, std::vector<std::uint64_t>(max_arity + 1, 0)));
  for (std::size_t s = 0; s < n; ++s)
    if (max_arity >= 1) c[s][0][1] = 1;
  for (std::size_t size = 1; size <= max_size; ++size)
    for (std::size_t op = 0; op < sig.num_ops(); ++op) {
      const OperationDef& o = sig.op(op);
      // ways[m][a]: ways to fill the first j children using total size m and arity a
      std::vector<std::vector<std::uint64_t>> ways(size, std::vector<std::uint64_t>(max_arity + 1, 0));
      ways[0][0] = 1;
      for (SortIndex in : o.inputs) {
        std::vector<std::vector<std::uint64_t>> next(size, std::vector<std::uint64_t>(max_arity + 1, 0));
        for (std::size_t m = 0; m < size; ++m)
          for (std::size_t a = 0; a <= max_arity; ++a) {
            if (ways[m][a] == 0) continue;
            for (std::size_t cm = 0; m + cm < size; ++cm)
              for (std::size_t ca = 0; a + ca <= max_arity; ++ca) next[m + cm][a + ca] += ways[m][a] * c[in.id][cm][ca];
          }
        ways = std::move(next);
      }
      for (std::size_t a = 0; a <= max_arity; ++a) c[o.output.id][size][a] += ways[size - 1][a];
    }
  return c;
}

std::vector<Value> random_args(const Signature& sig, const std::vector<SortIndex>& sorts, std::mt19937_64& rng) {
  std::vector<Value> out;
  for (SortIndex s : sorts) {
    const auto elems = sig.elements(s);
    out.push_back(elems[rng() % elems.size()]);
  }
  return out;
}

}  // namespace

TEST(Terms, UnaryTermsAreIdentities) {
  const Signature sig = make_vspace_signature(Field::prime(2), 3);
  for (std::size_t size = 0; size <= 4; ++size) {
    const auto f = enumerate_terms(sig, kScalarSort, 1, size);
    const auto v = enumerate_terms(sig, kVectorSort, 1, size);
    ASSERT_EQ(f.size(), 1u);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_TRUE(f[0].is_leaf());
    EXPECT_TRUE(v[0].is_leaf());
  }
}

TEST(Terms, BinaryTermsAreTheOperations) {
  const Signature sig = make_vspace_signature(Field::prime(3), 2);
  for (std::size_t size = 1; size <= 4; ++size) {
    std::size_t binary = 0;
    std::set<std::size_t> ops;
    for (SortIndex s : {kScalarSort, kVectorSort})
      for (const OrderlyTerm& t : enumerate_terms(sig, s, 2, size)) {
        if (t.arity() != 2) continue;
        ++binary;
        ASSERT_EQ(t.size(), 1u);
        ops.insert(t.op());
      }
    EXPECT_EQ(binary, 4u);
    EXPECT_EQ(ops.size(), 4u);
  }
}

TEST(Terms, EnumerationMatchesCountingOracle) {
  std::vector<Signature> sigs{make_vspace_signature(Field::prime(2), 2), make_k_signature(Field::prime(5), 2)};
  std::vector<Phylum> phyla{{"A", FiniteEnumerated{{"a", "b"}}}, {"B", FiniteEnumerated{{"c"}}}};
  std::vector<OperationDef> ops{
      {"g", {SortIndex{0}, SortIndex{1}, SortIndex{0}}, SortIndex{0}, ConstantBody{Value::atom(SortIndex{0}, 0)}},
      {"h", {SortIndex{0}}, SortIndex{1}, ConstantBody{Value::atom(SortIndex{1}, 0)}}};
  sigs.emplace_back(phyla, ops);
  for (const Signature& sig : sigs) {
    const std::size_t max_size = 4;
    const std::size_t max_arity = 5;
    const Counts c = count_trees(sig, max_size, max_arity);
    for (std::uint32_t s = 0; s < sig.num_phyla(); ++s) {
      const auto terms = enumerate_terms(sig, SortIndex{s}, max_arity, max_size);
      std::uint64_t expect = 0;
      for (std::size_t n = 0; n <= max_size; ++n)
        for (std::size_t a = 1; a <= max_arity; ++a) expect += c[s][n][a];
      EXPECT_EQ(terms.size(), expect) << "sort " << s;
      for (std::size_t i = 1; i < terms.size(); ++i) ASSERT_TRUE(terms[i - 1] < terms[i]);
      for (const OrderlyTerm& t : terms) {
        ASSERT_EQ(t.output().id, s);
        ASSERT_LE(t.size(), max_size);
        ASSERT_LE(t.arity(), max_arity);
      }
    }
  }
}

TEST(Terms, CatalogAgreesWithEnumeration) {
  const Signature sig = make_vspace_signature(Field::prime(2), 2);
  const TermCatalog cat(sig, 3, 3);
  for (SortIndex s : {kScalarSort, kVectorSort}) EXPECT_EQ(cat.terms(s), enumerate_terms(sig, s, 3, 3));
}

TEST(Terms, TextRoundTrip) {
  const Signature sig = make_vspace_signature(Field::prime(3), 2);
  for (SortIndex s : {kScalarSort, kVectorSort})
    for (const OrderlyTerm& t : enumerate_terms(sig, s, 3, 3)) {
      const std::string text = to_string(sig, t);
      EXPECT_EQ(parse_term(sig, text), t) << text;
    }
  EXPECT_EQ(to_string(sig, OrderlyTerm::node(sig, 0,
                                             {OrderlyTerm::node(sig, 3, {OrderlyTerm::leaf(kScalarSort),
                                                                         OrderlyTerm::leaf(kVectorSort)}),
                                              OrderlyTerm::leaf(kVectorSort)})),
            "(+V (. (idF _) (idV _)) (idV _))");
  EXPECT_THROW(parse_term(sig, "(+V (idV _)"), PreconditionError);
  EXPECT_THROW(parse_term(sig, "(+F (idV _) (idV _))"), PreconditionError);
  EXPECT_THROW(parse_term(sig, "(nope (idV _))"), PreconditionError);
}

TEST(Terms, NodeChecksChildSorts) {
  const Signature sig = make_vspace_signature(Field::prime(2), 2);
  EXPECT_THROW(OrderlyTerm::node(sig, 0, {OrderlyTerm::leaf(kScalarSort), OrderlyTerm::leaf(kVectorSort)}),
               PreconditionError);
  EXPECT_THROW(OrderlyTerm::node(sig, 0, {OrderlyTerm::leaf(kVectorSort)}), PreconditionError);
}

TEST(Terms, EvaluateFollowsStructure) {
  const Signature sig = make_vspace_signature(Field::prime(5), 2);
  // (+V (. x v) w) = x.v + w
  const OrderlyTerm t = parse_term(sig, "(+V (. (idF _) (idV _)) (idV _))");
  const Value x = sig.make_scalar(kScalarSort, 3);
  const Value v = sig.make_vector(kVectorSort, {1, 2});
  const Value w = sig.make_vector(kVectorSort, {4, 4});
  EXPECT_EQ(evaluate(sig, t, std::vector<Value>{x, v, w}), sig.make_vector(kVectorSort, {2, 0}));
  EXPECT_THROW(evaluate(sig, t, std::vector<Value>{x, v}), PreconditionError);
  EXPECT_THROW(evaluate(sig, t, std::vector<Value>{v, v, w}), PreconditionError);
}

TEST(Terms, SubstitutionComposesEvaluation) {
  const Signature sig = make_vspace_signature(Field::prime(3), 2);
  std::mt19937_64 rng(9);
  const auto outer_terms = enumerate_terms(sig, kVectorSort, 3, 2);
  std::map<std::uint32_t, std::vector<OrderlyTerm>> inner;
  for (SortIndex s : {kScalarSort, kVectorSort}) inner[s.id] = enumerate_terms(sig, s, 2, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const OrderlyTerm& outer = outer_terms[rng() % outer_terms.size()];
    std::vector<OrderlyTerm> reps;
    for (SortIndex s : outer.inputs()) reps.push_back(inner[s.id][rng() % inner[s.id].size()]);
    const OrderlyTerm comp = substitute(sig, outer, reps);
    const auto args = random_args(sig, comp.inputs(), rng);
    std::vector<Value> mid;
    std::size_t pos = 0;
    for (const OrderlyTerm& r : reps) {
      std::vector<Value> block(args.begin() + static_cast<std::ptrdiff_t>(pos),
                               args.begin() + static_cast<std::ptrdiff_t>(pos + r.arity()));
      mid.push_back(evaluate(sig, r, block));
      pos += r.arity();
    }
    ASSERT_EQ(evaluate(sig, comp, args), evaluate(sig, outer, mid));
  }
}

TEST(Terms, SemanticDedupKeepsOneRepresentative) {
  const Signature sig = make_vspace_signature(Field::prime(2), 2);
  const auto terms = enumerate_terms(sig, kVectorSort, 3, 3);
  const auto kept = dedup_semantic(sig, terms);
  EXPECT_LT(kept.size(), terms.size());
  auto table = [&](const OrderlyTerm& t) {
    std::vector<Value> out;
    std::vector<std::vector<Value>> domains;
    for (SortIndex s : t.inputs()) domains.push_back(sig.elements(s));
    std::vector<std::size_t> idx(domains.size(), 0);
    while (true) {
      std::vector<Value> args;
      for (std::size_t k = 0; k < idx.size(); ++k) args.push_back(domains[k][idx[k]]);
      out.push_back(evaluate(sig, t, args));
      std::size_t k = idx.size();
      while (k > 0 && ++idx[k - 1] == domains[k - 1].size()) idx[--k] = 0;
      if (k == 0) break;
    }
    return std::make_pair(t.inputs(), out);
  };
  std::set<std::pair<std::vector<SortIndex>, std::vector<Value>>> seen;
  for (const OrderlyTerm& t : kept) EXPECT_TRUE(seen.insert(table(t)).second);
  for (const OrderlyTerm& t : terms) EXPECT_TRUE(seen.contains(table(t)));
}
