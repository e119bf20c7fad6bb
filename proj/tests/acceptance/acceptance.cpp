#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ralg/dsl/elaborate.hpp"
#include "ralg/dsl/parser.hpp"
#include "ralg/error.hpp"
#include "ralg/unary.hpp"
#include "ralg/vspace.hpp"

using namespace ralg;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string str(std::size_t n) { return std::to_string(n); }

std::uint32_t residue(const Scalar& s) { return std::get<Residue>(s).value; }

Vector residues(const std::vector<std::uint32_t>& xs) {
  Vector v;
  for (std::uint32_t x : xs) v.push_back(Residue{x});
  return v;
}

// 1
Outcome term_census() {
  const Signature sig = make_vspace_signature(Field::prime(2), 3);
  std::set<std::string> unary;
  for (SortIndex s : {kScalarSort, kVectorSort})
    for (const OrderlyTerm& t : enumerate_terms(sig, s, 1, 3)) unary.insert(to_string(sig, t));
  const std::set<std::string> want_unary{"(idF _)", "(idV _)"};

  std::set<std::string> small;
  std::size_t listed = 0;
  for (SortIndex s : {kScalarSort, kVectorSort})
    for (const OrderlyTerm& t : enumerate_terms(sig, s, 2, 1)) {
      small.insert(to_string(sig, t));
      ++listed;
    }
  std::set<std::string> want_small = want_unary;
  for (const OperationDef& op : sig.ops()) {
    std::string text = "(" + op.name;
    for (SortIndex in : op.inputs) text += " (id" + sig.phylum(in).name + " _)";
    want_small.insert(text + ")");
  }
  const bool ok = unary == want_unary && small == want_small && listed == 6;
  return {ok, "arity 1: " + str(unary.size()) + " terms, arity 2 size 1: " + str(listed) + " terms"};
}

// 2
Outcome zero_scalar_sums() {
  std::size_t checked = 0;
  std::size_t bad = 0;
  for (std::uint32_t p : {2u, 3u}) {
    const Signature sig = make_vspace_signature(Field::prime(p), 2);
    const std::vector<Value> vectors = sig.elements(kVectorSort);
    const Value zero_scalar = Value::scalar(kScalarSort, Residue{0});
    for (SortIndex out : {kScalarSort, kVectorSort})
      for (const OrderlyTerm& t : enumerate_terms(sig, out, 3, 3)) {
        const std::vector<SortIndex> in = t.inputs();
        std::vector<std::size_t> vec_pos;
        for (std::size_t i = 0; i < in.size(); ++i)
          if (in[i] == kVectorSort) vec_pos.push_back(i);
        std::vector<std::size_t> pick(vec_pos.size(), 0);
        while (true) {
          std::vector<Value> args(in.size(), zero_scalar);
          for (std::size_t k = 0; k < vec_pos.size(); ++k) args[vec_pos[k]] = vectors[pick[k]];
          const Value r = evaluate(sig, t, args);
          ++checked;
          if (out == kScalarSort) {
            bad += !(r == zero_scalar);
          } else {
            bool hit = false;
            for (std::size_t mask = 0; mask < (std::size_t{1} << vec_pos.size()) && !hit; ++mask) {
              std::vector<std::uint32_t> acc(2, 0);
              for (std::size_t k = 0; k < vec_pos.size(); ++k)
                if (mask >> k & 1)
                  for (std::size_t c = 0; c < 2; ++c) acc[c] = (acc[c] + residue(vectors[pick[k]].as_vector()[c])) % p;
              hit = r.as_vector() == residues(acc);
            }
            bad += !hit;
          }
          std::size_t k = 0;
          while (k < pick.size() && ++pick[k] == vectors.size()) pick[k++] = 0;
          if (k == pick.size()) break;
        }
      }
  }
  return {bad == 0, str(checked) + " evaluations, " + str(bad) + " violations"};
}

// Coefficients of a K-term read off by evaluating on e1 in one slot and O elsewhere.
std::vector<std::uint32_t> k_coefficients(const Signature& ksig, const OrderlyTerm& t, std::uint32_t dim) {
  std::vector<std::uint32_t> out;
  const Value zero = ksig.zero_vector(kVectorSort);
  std::vector<std::uint32_t> e1(dim, 0);
  e1[0] = 1;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    std::vector<Value> args(t.arity(), zero);
    args[i] = Value::vector(kVectorSort, residues(e1));
    out.push_back(residue(evaluate(ksig, t, args).as_vector()[0]));
  }
  return out;
}

// 3
Outcome k_term_coefficients() {
  const std::uint32_t p = 5;
  const Signature ksig = make_k_signature(Field::prime(p), 2);
  const auto tuples = [&](std::size_t size, std::size_t& terms) {
    std::set<std::vector<std::uint32_t>> got;
    for (const OrderlyTerm& t : enumerate_terms(ksig, kVectorSort, 3, size)) {
      got.insert(k_coefficients(ksig, t, 2));
      ++terms;
    }
    return got;
  };
  std::set<std::vector<std::uint32_t>> want;
  for (std::size_t len = 1; len <= 3; ++len) {
    std::vector<std::uint32_t> c(len, 1);
    while (true) {
      want.insert(c);
      std::size_t k = 0;
      while (k < len && ++c[k] == p) c[k++] = 1;
      if (k == len) break;
    }
  }
  // Two scalings over three leaves give coefficients from {1, a, b, ab} with a and b on nested
  // subtrees, so a triple of three distinct entries other than 1 needs a third.
  std::set<std::vector<std::uint32_t>> needs_three;
  for (const auto& c : want)
    if (c.size() == 3 && c[0] != c[1] && c[1] != c[2] && c[0] != c[2] &&
        std::find(c.begin(), c.end(), 1u) == c.end())
      needs_three.insert(c);

  std::size_t terms4 = 0;
  std::size_t terms5 = 0;
  const auto got4 = tuples(4, terms4);
  const auto got5 = tuples(5, terms5);
  std::size_t extra = 0;
  for (const auto& c : got5) extra += !want.contains(c);
  std::set<std::vector<std::uint32_t>> missed4;
  for (const auto& c : want)
    if (!got4.contains(c)) missed4.insert(c);
  const bool ok = extra == 0 && missed4 == needs_three && got5 == want;
  return {ok, "size 4: " + str(terms4) + " terms, " + str(got4.size()) + "/" + str(want.size()) + " tuples, " +
                  str(missed4.size()) + " missed (all need three scalings); size 5: " + str(terms5) + " terms, " +
                  str(got5.size()) + "/" + str(want.size()) + " tuples; " + str(extra) + " tuples with a zero coefficient"};
}

// 4
Outcome beta_construction() {
  const BetaSequence beta = build_beta(8, 3);
  const BetaVerification v = verify_beta(beta, 3);
  std::string values;
  for (const BigInt& b : beta.values) values += (values.empty() ? "" : " ") + b.str();
  return {v.ok() && beta.values.size() == 8,
          "beta = <" + values + ">, " + str(v.lhs_values) + " sums vs " + str(v.rhs_values) + " products, " +
              str(v.violations.size()) + " violations"};
}

// 5
Outcome counterexamples() {
  std::string detail;
  bool ok = true;
  const auto add = [&](const char* name, const std::function<CounterexampleReport()>& f) {
    const auto t0 = Clock::now();
    const CounterexampleReport r = f();
    const double ms = ms_since(t0);
    ok = ok && r.ok() && r.reductions > 0 && ms < 300000;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s %zu reductions %zu violations %.0f ms", detail.empty() ? "" : "; ", name,
                  r.reductions, r.violations.size(), ms);
    detail += buf;
  };
  const BetaSequence beta = build_beta(6, 3);
  add("field", [&] { return verify_field_counterexample(beta, {2, 2}); });
  add("vspace", [&] {
    return verify_vspace_counterexample(beta, SortWord({}, {kScalarSort, kVectorSort}), {Rational(1), Rational(0)}, {2, 2});
  });
  add("K", [] { return verify_k_infinite_counterexample(3, 6, {2, 3}); });
  return {ok, detail};
}

// 6
Outcome longproof_trials() {
  const Signature sig = make_vspace_signature(Field::prime(2), 3);
  const SortWord e({}, {kVectorSort, kScalarSort});
  SortedPrefix b{{}, e};
  const std::vector<std::vector<std::int64_t>> vs{{1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  for (std::size_t i = 0; i < 12; ++i)
    b.values.push_back(i % 2 ? sig.make_scalar(kScalarSort, 0) : sig.make_vector(kVectorSort, vs[(i / 2) % 3]));
  std::size_t found = 0;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> colors(8);
    for (auto& c : colors) c = rng() % 2;
    const Coloring c = table_coloring(sig, kVectorSort, colors, 2);
    const auto t0 = Clock::now();
    const LongproofResult r = longproof_search(sig, b, e, c, {});
    const double ms = ms_since(t0);
    worst = std::max(worst, ms);
    if (!r.report.found() || ms > 60000) continue;
    const Found& f = r.report.result();
    const FRSet fr = fr_set(sig, f.a, e, {2, 0});
    bool mono = true;
    for (const auto& [v, w] : fr.elements) mono = mono && c.color(v) == f.color;
    const auto stage = [&](const std::string& prefix) {
      return std::any_of(r.stages.begin(), r.stages.end(), [&](const std::string& st) { return st.rfind(prefix, 0) == 0; });
    };
    found += f.a.size() == 3 && check_witness(sig, f.a, b, f.witness).ok && mono && stage("zero_scalar_reduction") &&
             stage("hindman_search found");
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu/20 trials homogeneous, slowest %.1f ms", found, worst);
  return {found == 20, buf};
}

// 7
Outcome katetov_sweep() {
  std::mt19937_64 rng(2024);
  std::size_t good = 0;
  double worst = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const std::size_t n = i % 10 == 0 ? 10000 : 2 + rng() % 9999;
    const std::vector<std::size_t> T = random_fixed_point_free_map(n, rng());
    const auto t0 = Clock::now();
    const ThreePartition p = katetov_partition(T);
    const double ms = ms_since(t0);
    worst = std::max(worst, ms);
    std::vector<int> part(n, -1);
    bool ok = true;
    for (int k = 0; k < 3; ++k)
      for (std::size_t x : p.parts[k]) {
        ok = ok && x < n && part[x] == -1;
        if (x < n) part[x] = k;
      }
    for (std::size_t x = 0; x < n && ok; ++x) ok = part[x] != -1 && part[T[x]] != part[x];
    good += ok && ms < 100;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu/1000 partitions valid within 100 ms, slowest %.2f ms", good, worst);
  return {good == 1000, buf};
}

// Canonical relabeling of a unary algebra: least encoding over carrier permutations and op orders.
std::vector<std::size_t> canonical(std::size_t n, const std::vector<std::vector<std::size_t>>& ops) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best;
  do {
    std::vector<std::size_t> inv(n);
    for (std::size_t i = 0; i < n; ++i) inv[perm[i]] = i;
    std::vector<std::vector<std::size_t>> relabeled;
    for (const auto& op : ops) {
      std::vector<std::size_t> r(n);
      for (std::size_t i = 0; i < n; ++i) r[perm[i]] = perm[op[i]];
      relabeled.push_back(r);
    }
    std::sort(relabeled.begin(), relabeled.end());
    std::vector<std::size_t> code;
    for (const auto& r : relabeled) code.insert(code.end(), r.begin(), r.end());
    if (best.empty() || code < best) best = code;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Ramsey by bounded search: every sequence of length <= |A| and every 2-coloring admits a homogeneous reduction.
bool brute_force_ramsey(std::size_t n, const std::vector<std::vector<std::size_t>>& ops) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("a" + std::to_string(i));
  std::vector<OperationDef> defs;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    TableBody table;
    for (std::size_t x : ops[k]) table.outputs.push_back(Value::atom(SortIndex{0}, static_cast<std::uint32_t>(x)));
    defs.push_back({"g" + std::to_string(k), {SortIndex{0}}, SortIndex{0}, table});
  }
  const Signature sig({{"A", FiniteEnumerated{names}}}, defs);
  const SortWord e = SortWord::constant(SortIndex{0});
  const HomogeneityBounds bounds{{n, 0}, {n, 0}};
  std::vector<Coloring> colorings;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> colors(n);
    for (std::size_t i = 0; i < n; ++i) colors[i] = mask >> i & 1;
    colorings.push_back(table_coloring(sig, SortIndex{0}, colors, 2));
  }
  for (std::size_t len = 1; len <= n; ++len) {
    std::vector<std::size_t> seq(len, 0);
    while (true) {
      SortedPrefix b{{}, e};
      for (std::size_t x : seq) b.values.push_back(Value::atom(SortIndex{0}, static_cast<std::uint32_t>(x)));
      for (const Coloring& c : colorings)
        if (!find_homogeneous(sig, b, e, c, 1, bounds).found()) return false;
      std::size_t k = 0;
      while (k < len && ++seq[k] == n) seq[k++] = 0;
      if (k == len) break;
    }
  }
  return true;
}

// 8
Outcome unary_equivalence() {
  std::size_t classes = 0;
  std::size_t ramsey = 0;
  std::size_t disagree = 0;
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t k = 0; k <= 2; ++k) {
      std::size_t maps = 1;
      for (std::size_t i = 0; i < n; ++i) maps *= n;
      std::size_t total = 1;
      for (std::size_t j = 0; j < k; ++j) total *= maps;
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::vector<std::size_t>> ops(k, std::vector<std::size_t>(n));
        std::size_t rest = code;
        for (auto& op : ops)
          for (auto& x : op) {
            x = rest % n;
            rest /= n;
          }
        std::vector<std::size_t> flat;
        for (const auto& op : ops) flat.insert(flat.end(), op.begin(), op.end());
        if (canonical(n, ops) != flat) continue;
        ++classes;
        UnaryAlgebra alg;
        for (std::size_t i = 0; i < n; ++i) alg.carrier.push_back(Value::atom(SortIndex{0}, static_cast<std::uint32_t>(i)));
        alg.ops = ops;
        const bool claimed = unary_ramsey_classification(alg).is_ramsey;
        const bool oracle = brute_force_ramsey(n, ops);
        ramsey += oracle;
        disagree += claimed != oracle;
      }
    }
  return {disagree == 0, str(classes) + " algebras up to isomorphism, " + str(ramsey) + " Ramsey, " + str(disagree) +
                             " disagreements"};
}

// 9
Outcome sort_rigidity() {
  const Signature sig = make_vspace_signature(Field::prime(3), 2);
  std::mt19937_64 rng(9);
  std::size_t sorts = 0;
  std::size_t reductions = 0;
  std::size_t bad = 0;
  for (std::size_t len = 1; len <= 3; ++len)
    for (std::size_t mask = 0; mask < (std::size_t{1} << len); ++mask)
      for (SortIndex tail : {kScalarSort, kVectorSort}) {
        std::vector<SortIndex> prefix;
        for (std::size_t i = 0; i < len; ++i) prefix.push_back(mask >> i & 1 ? kVectorSort : kScalarSort);
        const SortWord e(prefix, {tail});
        const OmegaClass oc = omega_class(e, 2);
        if (in_omega(oc)) continue;
        const std::size_t n_star = *std::get<NotInOmega>(oc).n_star;
        ++sorts;
        for (int trial = 0; trial < 3; ++trial) {
          SortedPrefix b{{}, e};
          for (std::size_t i = 0; i < n_star + 5; ++i) {
            const auto elems = sig.elements(e.at(i));
            b.values.push_back(elems[rng() % elems.size()]);
          }
          enumerate_reductions(sig, b, e, n_star + 2, {2, 0}, [&](const SortedPrefix& a, const ReductionWitness& w) {
            ++reductions;
            for (std::size_t i = 0; i <= n_star; ++i)
              bad += !(a.values[i] == b.values[i]) || w.entries[i].indices != std::vector<std::size_t>{i};
            return true;
          });
        }
      }
  return {bad == 0 && reductions > 0,
          str(sorts) + " sorts outside Omega, " + str(reductions) + " reductions, " + str(bad) + " violations"};
}

bool span_valid(const dsl::Diagnostic& d, const std::string& text) {
  if (d.span.begin > d.span.end || d.span.end > text.size()) return false;
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < d.span.begin; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return d.span.line == line && d.span.column == col;
}

// 10
Outcome dsl_round_trip() {
  std::size_t files = 0;
  std::size_t identical = 0;
  std::size_t diagnostics = 0;
  std::size_t bad_spans = 0;
  std::mt19937_64 rng(10);
  for (const auto& entry : std::filesystem::directory_iterator(FIXTURE_DIR)) {
    if (entry.path().extension() != ".ralg") continue;
    ++files;
    std::ifstream in(entry.path());
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const dsl::ParseResult r = dsl::parse(text);
    const std::string printed = dsl::pretty_print(r.ast);
    const dsl::ParseResult again = dsl::parse(printed);
    const auto elab = dsl::elaborate(r.ast);
    identical += r.ok() && again.ok() && again.ast == r.ast && dsl::pretty_print(again.ast) == printed && elab.ok();
    // damaged copies must still report in-bounds positions
    for (int k = 0; k < 40; ++k) {
      std::string broken = text;
      const std::size_t at = rng() % broken.size();
      switch (k % 4) {
        case 0: broken.erase(at, 1 + rng() % 6); break;
        case 1: broken.insert(at, 1, "$=[<'\"{"[rng() % 7]); break;
        case 2: broken.resize(at); break;
        default: broken.insert(at, " 7/0 "); break;
      }
      const dsl::ParseResult br = dsl::parse(broken);
      std::vector<dsl::Diagnostic> ds = br.diagnostics;
      if (br.ok()) {
        const auto be = dsl::elaborate(br.ast);
        ds.insert(ds.end(), be.diagnostics.begin(), be.diagnostics.end());
      }
      for (const dsl::Diagnostic& d : ds) {
        ++diagnostics;
        bad_spans += !span_valid(d, broken);
      }
    }
  }
  return {files > 0 && identical == files && bad_spans == 0,
          str(identical) + "/" + str(files) + " files round-trip, " + str(diagnostics) + " diagnostics on damaged copies, " +
              str(bad_spans) + " bad spans"};
}

// 11
Outcome zero_terms() {
  std::mt19937_64 rng(11);
  std::size_t good = 0;
  for (std::size_t i = 0; i < 500; ++i) {
    const std::uint32_t p = std::vector<std::uint32_t>{2, 3, 5}[i % 3];
    const std::uint32_t dim = 1 + rng() % 6;
    const Signature ksig = make_k_signature(Field::prime(p), dim);
    std::vector<Vector> vs(dim + 1);
    for (auto& v : vs)
      for (std::uint32_t c = 0; c < dim; ++c) v.push_back(Residue{static_cast<std::uint32_t>(rng() % p)});
    const ZeroTerm z = finite_dim_zero_term(ksig, vs);
    const std::vector<std::uint32_t> coeffs = k_coefficients(ksig, z.term, dim);
    bool ok = coeffs.size() == z.indices.size() && !coeffs.empty();
    std::vector<std::uint32_t> sum(dim, 0);
    std::vector<Value> args;
    for (std::size_t j = 0; j < coeffs.size() && ok; ++j) {
      ok = coeffs[j] % p != 0 && z.indices[j] < vs.size() && (j == 0 || z.indices[j - 1] < z.indices[j]);
      if (!ok) break;
      args.push_back(Value::vector(kVectorSort, vs[z.indices[j]]));
      for (std::uint32_t c = 0; c < dim; ++c) sum[c] = (sum[c] + coeffs[j] * residue(vs[z.indices[j]][c])) % p;
    }
    ok = ok && std::all_of(sum.begin(), sum.end(), [](std::uint32_t x) { return x == 0; }) &&
         evaluate(ksig, z.term, args) == ksig.zero_vector(kVectorSort);
    good += ok;
  }
  return {good == 500, str(good) + "/500 terms vanish with nonzero coefficients"};
}

struct Criterion {
  int number;
  const char* name;
  double limit_ms;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<Criterion> criteria{
      {1, "term census", 1000, term_census},
      {2, "zero scalars give subset sums", 60000, zero_scalar_sums},
      {3, "K-term coefficients", 60000, k_term_coefficients},
      {4, "beta construction", 300000, beta_construction},
      {5, "infinite field counterexamples", 900000, counterexamples},
      {6, "finite field homogeneous reductions", 20 * 60000, longproof_trials},
      {7, "three-part partitions", 1000 * 100, katetov_sweep},
      {8, "unary classification", 600000, unary_equivalence},
      {9, "sort rigidity", 60000, sort_rigidity},
      {10, "DSL round trip", 5000, dsl_round_trip},
      {11, "vanishing K-terms", 5000, zero_terms},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.contains(c.number)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double ms = ms_since(t0);
    if (ms > c.limit_ms) {
      o.pass = false;
      o.detail += " (over the time limit)";
    }
    failures += !o.pass;
    std::printf("criterion %2d %s: %s - %s [%.0f ms]\n", c.number, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), ms);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
