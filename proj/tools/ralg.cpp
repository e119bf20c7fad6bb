#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ralg/dsl/elaborate.hpp"
#include "ralg/dsl/parser.hpp"
#include "ralg/report.hpp"
#include "ralg/term.hpp"
#include "ralg/unary.hpp"
#include "ralg/vspace.hpp"

using namespace ralg;
using report::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitExhausted = 3;
constexpr int kExitViolations = 4;

struct InputError {
  std::string message;
};

struct Options {
  std::string file;
  std::string experiment;
  std::string out = "-";
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string sort;
  std::size_t max_arity = 2;
  std::size_t max_size = 3;
};

struct Loaded {
  std::string text;
  dsl::Program program;
};

Loaded load(const Options& o) {
  std::ifstream in(o.file, std::ios::binary);
  if (!in) throw InputError{"cannot read " + o.file};
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  dsl::ParseResult parsed = dsl::parse(text);
  if (!parsed.ok()) {
    std::string msg;
    for (const auto& d : parsed.diagnostics) msg += dsl::format_diagnostic(d, o.file) + "\n";
    throw InputError{msg};
  }
  dsl::ElaborateResult el = dsl::elaborate(parsed.ast, {o.seed});
  if (!el.ok()) {
    std::string msg;
    for (const auto& d : el.diagnostics) msg += dsl::format_diagnostic(d, o.file) + "\n";
    throw InputError{msg};
  }
  return {std::move(text), std::move(*el.program)};
}

std::string digest(const Loaded& l, const Options& o, std::string_view command) {
  std::string canon = l.text;
  canon += '\0';
  canon += std::string(command) + '\0' + o.experiment + '\0' + std::to_string(o.seed);
  return report::sha256_hex(canon);
}

void emit(const Options& o, const Json& j) {
  const std::string text = j.dump(2) + "\n";
  if (o.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InputError{"cannot write " + o.out};
  f << text;
}

/// Runs f(0..n-1) on up to `jobs` threads; results keep index order.
template <class F>
auto run_indexed(std::size_t n, unsigned jobs, F f) -> std::vector<decltype(f(std::size_t{0}))> {
  using R = decltype(f(std::size_t{0}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned t = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < t; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::vector<R> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

const dsl::ExperimentDef& pick(const Loaded& l, const Options& o, const std::vector<std::string>& kinds,
                               std::string_view command) {
  if (o.experiment.empty()) throw InputError{"--experiment is required"};
  const auto& all = l.program.experiments();
  auto it = all.find(o.experiment);
  if (it == all.end()) throw InputError{"no experiment named '" + o.experiment + "' in " + o.file};
  if (std::find(kinds.begin(), kinds.end(), it->second.kind) == kinds.end())
    throw InputError{"experiment " + o.experiment + " has kind " + it->second.kind + ", which '" + std::string(command) +
                     "' does not run"};
  return it->second;
}

int cmd_enumerate(const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded l = load(o);
  const Signature& sig = l.program.signature();
  std::optional<SortIndex> s = sig.find_phylum(o.sort);
  if (!s) {
    try {
      std::size_t pos = 0;
      const unsigned long i = std::stoul(o.sort, &pos);
      if (pos == o.sort.size() && i < sig.num_phyla()) s = SortIndex{static_cast<std::uint32_t>(i)};
    } catch (const std::exception&) {
    }
  }
  if (!s) throw InputError{"unknown phylum '" + o.sort + "'"};
  const auto terms = enumerate_terms(sig, *s, o.max_arity, o.max_size);
  Json list = Json::array();
  for (const OrderlyTerm& t : terms) list.push_back(to_string(sig, t));
  Json payload{{"sort", sig.phylum(*s).name}, {"count", terms.size()}, {"terms", list}};
  emit(o, report::envelope("enumerate-terms", "", digest(l, o, "enumerate-terms"),
                           Json{{"max_arity", o.max_arity}, {"max_size", o.max_size}}, "ok", payload,
                           elapsed_ms(start)));
  return kExitOk;
}

int cmd_search(const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded l = load(o);
  const dsl::Program& p = l.program;
  const Signature& sig = p.signature();
  const dsl::ExperimentDef& x = pick(l, o, {"search", "hindman", "longproof"}, "search");
  const std::string dg = digest(l, o, "search");
  Json bounds;
  Json payload;
  bool found = false;

  if (x.kind == "search") {
    const SortWord e = p.get_sort(x, "sort");
    const SortedPrefix b = p.get_prefix(x, "seq", e);
    const Coloring c = p.get_coloring(x, "coloring");
    const std::size_t target_len = p.get_size(x, "target_len", 1, 1);
    HomogeneityBounds hb{{p.get_size(x, "reduction_size", 1, 1), p.get_size(x, "reduction_arity", 0)},
                         {p.get_size(x, "fr_size", 2, 1), p.get_size(x, "fr_arity", 0)}};
    bounds = Json{{"target_len", target_len},
                  {"reduction", {{"max_term_size", hb.reduction.max_term_size}, {"max_arity", hb.reduction.max_arity}}},
                  {"fr", {{"max_term_size", hb.fr.max_term_size}, {"max_arity", hb.fr.max_arity}}}};
    const HomogeneityReport r = find_homogeneous(sig, b, e, c, target_len, hb);
    payload = report::homogeneity_json(sig, r);
    if (r.found()) {
      payload["fr_set"] = report::frset_json(sig, fr_set(sig, r.result().a, e, hb.fr));
      found = true;
    }
  } else if (x.kind == "hindman") {
    const std::size_t op = p.get_op(x, "op");
    const SortedPrefix b = p.get_prefix(x, "seq", SortWord::constant(sig.op(op).output));
    const Coloring c = p.get_coloring(x, "coloring");
    const std::size_t target_len = p.get_size(x, "target_len", 1, 1);
    const HindmanBounds hb{p.get_size(x, "max_block_size", 1, 1), p.get_size(x, "fr_max_term_size", 2, 1)};
    bounds = Json{{"target_len", target_len},
                  {"max_block_size", hb.max_block_size},
                  {"fr_max_term_size", hb.fr_max_term_size}};
    const HomogeneityReport r = hindman_search(sig, op, b, c, target_len, hb);
    payload = report::homogeneity_json(sig, r);
    found = r.found();
  } else {
    const SortWord e = p.get_sort(x, "sort");
    const SortedPrefix b = p.get_prefix(x, "seq", e);
    LongproofOptions lo;
    lo.target_len = p.get_size(x, "target_len", 3, 1);
    lo.hindman = {p.get_size(x, "max_block_size", 1, 1), p.get_size(x, "fr_max_term_size", 2, 1)};
    lo.fr = {p.get_size(x, "fr_size", 2, 1), 0};
    const std::size_t trials = p.get_size(x, "trials", 1, 1);
    const std::uint64_t base = p.coloring_seed(x, "coloring");
    bounds = Json{{"target_len", lo.target_len},
                  {"max_block_size", lo.hindman.max_block_size},
                  {"fr_max_term_size", lo.hindman.fr_max_term_size},
                  {"fr", {{"max_term_size", lo.fr.max_term_size}, {"max_arity", lo.fr.max_arity}}},
                  {"trials", trials}};
    const auto results = run_indexed(trials, o.jobs, [&](std::size_t i) {
      const std::uint64_t seed = base + i;
      const Coloring c = p.get_coloring(x, "coloring", seed);
      const LongproofResult r = longproof_search(sig, b, e, c, lo);
      Json t = report::homogeneity_json(sig, r.report);
      t["seed"] = seed;
      t["rho"] = r.rho ? report::value_json(sig, *r.rho) : Json(nullptr);
      t["s"] = r.s;
      t["stages"] = r.stages;
      return std::make_pair(r.report.found(), t);
    });
    Json list = Json::array();
    std::size_t ok = 0;
    for (const auto& [f, t] : results) {
      ok += f ? 1 : 0;
      list.push_back(t);
    }
    payload = Json{{"found", ok}, {"trials", list}};
    found = ok == trials;
  }
  emit(o, report::envelope("search", x.name, dg, bounds, found ? "Found" : "Exhausted", payload, elapsed_ms(start)));
  return found ? kExitOk : kExitExhausted;
}

int cmd_verify(const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded l = load(o);
  const dsl::Program& p = l.program;
  const Signature& sig = p.signature();
  const dsl::ExperimentDef& x = pick(
      l, o, {"katetov", "field_counterexample", "vspace_counterexample", "k_counterexample", "corteh", "beta"},
      "verify");
  const std::string dg = digest(l, o, "verify");
  Json bounds = Json::object();
  Json payload;
  std::vector<std::string> violations;
  std::string outcome;

  if (x.kind == "katetov") {
    if (p.has(x, "map")) {
      const std::vector<std::size_t> T = p.get_size_list(x, "map");
      const ThreePartition part = katetov_partition(T);
      if (!verify_three_partition(T, part)) violations.push_back("some part meets its own image");
      bounds = Json{{"size", T.size()}};
      payload = Json{{"partition", report::partition_json(part)}};
    } else {
      const std::size_t n = p.get_size(x, "size", std::nullopt, 2);
      const std::size_t instances = p.get_size(x, "instances", 1, 1);
      bounds = Json{{"size", n}, {"instances", instances}};
      const auto results = run_indexed(instances, o.jobs, [&](std::size_t i) {
        const auto T = random_fixed_point_free_map(n, o.seed + i);
        return verify_three_partition(T, katetov_partition(T));
      });
      for (std::size_t i = 0; i < results.size(); ++i)
        if (!results[i]) violations.push_back("instance with seed " + std::to_string(o.seed + i) + " failed");
      payload = Json{{"instances", instances}, {"seed", o.seed}};
    }
  } else if (x.kind == "beta") {
    const std::size_t length = p.get_size(x, "length", std::nullopt, 1);
    const std::size_t bound = p.get_size(x, "term_bound", std::nullopt, 1);
    BetaBuildOptions bo;
    bo.linear_limit = p.get_size(x, "linear_limit", 4096, 2);
    bo.budget = p.get_size(x, "budget", 200000, 1);
    bounds = Json{{"length", length}, {"term_bound", bound}};
    try {
      const BetaSequence beta = build_beta(length, bound, bo);
      const BetaVerification v = verify_beta(beta, bound);
      Json values = Json::array();
      for (const BigInt& b : beta.values) values.push_back(b.str());
      payload = Json{{"beta", values}, {"lhs_values", v.lhs_values}, {"rhs_values", v.rhs_values}};
      violations = v.violations;
    } catch (const ExhaustionError& e) {
      payload = Json{{"error", e.what()}};
      emit(o, report::envelope("verify", x.name, dg, bounds, "Exhausted", payload, elapsed_ms(start)));
      return kExitExhausted;
    }
  } else if (x.kind == "field_counterexample" || x.kind == "vspace_counterexample") {
    const std::size_t len = p.get_size(x, "beta_length", 6, 1);
    const std::size_t tb = p.get_size(x, "term_bound", 3, 1);
    const ReductionLimits lim{p.get_size(x, "reduction_length", 2, 1), p.get_size(x, "reduction_size", 2, 1)};
    bounds = Json{{"beta_length", len}, {"term_bound", tb}, {"reduction_length", lim.length},
                  {"reduction_size", lim.max_term_size}};
    const BetaSequence beta = build_beta(len, tb);
    const CounterexampleReport r = x.kind == "field_counterexample"
                                       ? verify_field_counterexample(beta, lim)
                                       : verify_vspace_counterexample(beta, p.get_sort(x, "sort"),
                                                                      p.get_vector(x, "vector", Field::rationals()), lim);
    payload = report::counterexample_json(r);
    violations = r.violations;
  } else if (x.kind == "k_counterexample") {
    const std::size_t pr = p.get_size(x, "p", std::nullopt, 2);
    const std::size_t basis = p.get_size(x, "basis", std::nullopt, 1);
    const ReductionLimits lim{p.get_size(x, "reduction_length", 2, 1), p.get_size(x, "reduction_size", 3, 1)};
    bounds = Json{{"p", pr}, {"basis", basis}, {"reduction_length", lim.length}, {"reduction_size", lim.max_term_size}};
    const CounterexampleReport r = verify_k_infinite_counterexample(static_cast<std::uint32_t>(pr), basis, lim);
    payload = report::counterexample_json(r);
    violations = r.violations;
  } else {
    const SortedPrefix b = p.get_prefix(x, "seq", SortWord::constant(kVectorSort));
    const std::size_t target_len = p.get_size(x, "target_len", 1, 1);
    const std::size_t mts = p.get_size(x, "max_term_size", 2, 1);
    const std::size_t fmts = p.get_size(x, "fr_max_term_size", 2, 1);
    bounds = Json{{"target_len", target_len}, {"max_term_size", mts}, {"fr_max_term_size", fmts}};
    const CortehResult r = corteh_gate(sig, b, target_len, mts, fmts);
    payload = Json{{"passes", r.passes}, {"details", r.details}};
    if (r.a) payload["a"] = report::prefix_json(sig, *r.a);
    if (r.witness) payload["witness"] = report::witness_json(sig, *r.witness);
    if (!r.passes) violations.push_back(r.details);
  }
  payload["violations"] = violations;
  outcome = violations.empty() ? "Verified" : "Violations";
  emit(o, report::envelope("verify", x.name, dg, bounds, outcome, payload, elapsed_ms(start)));
  return violations.empty() ? kExitOk : kExitViolations;
}

int cmd_classify(const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  const Loaded l = load(o);
  const dsl::Program& p = l.program;
  const Signature& sig = p.signature();
  const dsl::ExperimentDef& x = pick(l, o, {"classify_unary", "classify_vspace"}, "classify");
  Json payload;
  std::string outcome;
  if (x.kind == "classify_unary") {
    const UnaryAlgebra alg = unary_algebra_from_signature(sig, p.get_phylum(x, "phylum"));
    const UnaryClassification c = unary_ramsey_classification(alg);
    Json fixed = Json::array();
    Json unreachable = Json::array();
    for (const Value& v : c.fixed) fixed.push_back(report::value_json(sig, v));
    for (const Value& v : c.unreachable) unreachable.push_back(report::value_json(sig, v));
    outcome = c.is_ramsey ? "Ramsey" : "NotRamsey";
    payload = Json{{"verdict", outcome}, {"evidence", "fixed_point_reachability"}, {"is_ramsey", c.is_ramsey},
                   {"fixed", fixed}, {"unreachable", unreachable}};
  } else {
    const SortWord e = p.get_sort(x, "sort");
    const Classification c = classify_vspace(sig.field_of(kScalarSort), sig.dim_of(kVectorSort), e);
    outcome = to_string(c.verdict);
    payload = Json{{"verdict", outcome}, {"evidence", c.evidence}, {"reason", c.reason}, {"sort", e.to_string()}};
  }
  emit(o, report::envelope("classify", x.name, digest(l, o, "classify"), Json::object(), outcome, payload,
                           elapsed_ms(start)));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ralg: computational toolkit for Ramsey algebras"};
  app.set_version_flag("--version", "ralg 1.0.0");
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool experiment) {
    sub->add_option("file", o.file, "input .ralg file")->required();
    sub->add_option("--out", o.out, "report path, - for stdout");
    sub->add_option("--seed", o.seed, "seed for random colorings and sweeps");
    if (experiment) {
      sub->add_option("--experiment", o.experiment, "experiment to run")->required();
      sub->add_option("--jobs", o.jobs, "worker threads for sweeps")->check(CLI::Range(1u, 256u));
    }
  };
  CLI::App* en = app.add_subcommand("enumerate-terms", "list orderly terms of one output phylum");
  common(en, false);
  en->add_option("--sort", o.sort, "output phylum name or index")->required();
  en->add_option("--max-arity", o.max_arity, "largest arity");
  en->add_option("--max-size", o.max_size, "largest term size");
  CLI::App* se = app.add_subcommand("search", "run a homogeneity search experiment");
  common(se, true);
  CLI::App* ve = app.add_subcommand("verify", "run a verification experiment");
  common(ve, true);
  CLI::App* cl = app.add_subcommand("classify", "classify an algebra");
  common(cl, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (en->parsed()) return cmd_enumerate(o);
    if (se->parsed()) return cmd_search(o);
    if (ve->parsed()) return cmd_verify(o);
    return cmd_classify(o);
  } catch (const InputError& e) {
    std::cerr << e.message << (e.message.ends_with('\n') ? "" : "\n");
  } catch (const dsl::ElaborationError& e) {
    std::cerr << dsl::format_diagnostic(e.diagnostic(), o.file) << "\n";
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
  } catch (const ExhaustionError& e) {
    std::cerr << "exhausted: " << e.what() << "\n";
    return kExitExhausted;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitInput;
}
