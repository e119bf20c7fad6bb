#include "ralg/reduction.hpp"

#include <algorithm>

#include "ralg/error.hpp"

namespace ralg {

std::vector<std::string> validate_prefix(const Signature& sig, const SortedPrefix& p) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    const SortIndex s = p.sort.at(i);
    if (!sig.valid_sort(s)) {
      out.push_back("position " + std::to_string(i) + ": sort index " + std::to_string(s.id) + " out of range");
    } else if (!sig.contains(s, p.values[i])) {
      out.push_back("position " + std::to_string(i) + ": value " + sig.format(p.values[i]) + " is not in phylum " +
                    sig.phylum(s).name);
    }
  }
  return out;
}

std::size_t ReductionWitness::total_size() const {
  std::size_t n = 0;
  for (const auto& en : entries) n += en.term.size();
  return n;
}

std::size_t ReductionWitness::max_term_size() const {
  std::size_t n = 0;
  for (const auto& en : entries) n = std::max(n, en.term.size());
  return n;
}

std::size_t ReductionWitness::max_arity() const {
  std::size_t n = 0;
  for (const auto& en : entries) n = std::max(n, en.term.arity());
  return n;
}

ReductionWitness identity_witness(std::size_t length, const SortWord& sort) {
  ReductionWitness w;
  for (std::size_t i = 0; i < length; ++i) w.entries.push_back({OrderlyTerm::leaf(sort.at(i)), {i}});
  return w;
}

CheckResult check_witness(const Signature& sig, const SortedPrefix& a, const SortedPrefix& b,
                          const ReductionWitness& w) {
  auto fail = [](std::string msg) { return CheckResult{false, std::move(msg)}; };
  if (auto v = validate_prefix(sig, b); !v.empty()) return fail("b: " + v.front());
  if (auto v = validate_prefix(sig, a); !v.empty()) return fail("a: " + v.front());
  if (w.entries.size() != a.values.size())
    return fail("witness has " + std::to_string(w.entries.size()) + " entries for " + std::to_string(a.values.size()) +
                " values");
  std::optional<std::size_t> last;
  for (std::size_t j = 0; j < w.entries.size(); ++j) {
    const WitnessEntry& en = w.entries[j];
    const std::string tag = "entry " + std::to_string(j) + ": ";
    if (en.indices.size() != en.term.arity())
      return fail(tag + "term arity " + std::to_string(en.term.arity()) + " but " + std::to_string(en.indices.size()) +
                  " indices");
    std::vector<Value> args;
    for (std::size_t k = 0; k < en.indices.size(); ++k) {
      const std::size_t i = en.indices[k];
      if (last && i <= *last) return fail(tag + "indices are not strictly increasing");
      if (i >= b.values.size()) return fail(tag + "index " + std::to_string(i) + " outside b");
      if (b.values[i].phylum() != en.term.inputs()[k]) return fail(tag + "sort mismatch at index " + std::to_string(i));
      last = i;
      args.push_back(b.values[i]);
    }
    if (en.term.output() != a.values[j].phylum()) return fail(tag + "term output sort differs from a's sort");
    if (!(evaluate(sig, en.term, args) == a.values[j])) return fail(tag + "term value differs from a(" + std::to_string(j) + ")");
  }
  return {};
}

ReductionWitness compose_witnesses(const Signature& sig, const ReductionWitness& outer, const ReductionWitness& inner) {
  ReductionWitness out;
  for (const WitnessEntry& en : outer.entries) {
    std::vector<OrderlyTerm> repl;
    WitnessEntry composed{en.term, {}};
    for (std::size_t i : en.indices) {
      if (i >= inner.entries.size()) throw PreconditionError("outer witness refers past the inner reduction");
      repl.push_back(inner.entries[i].term);
      const auto& idx = inner.entries[i].indices;
      composed.indices.insert(composed.indices.end(), idx.begin(), idx.end());
    }
    composed.term = substitute(sig, en.term, repl);
    out.entries.push_back(std::move(composed));
  }
  return out;
}

namespace {

class ReductionSearch {
 public:
  ReductionSearch(const Signature& sig, const TermCatalog& cat, const SortedPrefix& b, const SortWord& e,
                  std::size_t target, std::optional<std::size_t> exact, SearchStats* stats)
      : sig_(sig), cat_(cat), b_(b), e_(e), target_(target), exact_(exact), stats_(stats) {}

  // Runs the visitor on every completion of the current partial reduction
  // from position j, using b indices >= start.
  bool dfs(std::size_t j, std::size_t start, std::size_t used, const ReductionVisitor& visit) {
    if (stats_ != nullptr) {
      ++stats_->nodes;
      stats_->max_depth = std::max(stats_->max_depth, j);
    }
    if (j == target_) {
      if (exact_ && used != *exact_) return true;
      SortedPrefix a{values_, e_};
      return visit(a, ReductionWitness{entries_});
    }
    const std::size_t reserve = target_ - j - 1;
    for (const OrderlyTerm& t : cat_.terms(e_.at(j))) {
      if (exact_ && used + t.size() > *exact_) break;
      bool keep_going = for_each_tuple(t, start, reserve, [&](const std::vector<std::size_t>& idx) {
        std::vector<Value> args;
        args.reserve(idx.size());
        for (std::size_t i : idx) args.push_back(b_.values[i]);
        values_.push_back(evaluate_unchecked(sig_, t, args));
        entries_.push_back({t, idx});
        bool go = dfs(j + 1, idx.back() + 1, used + t.size(), visit);
        values_.pop_back();
        entries_.pop_back();
        return go;
      });
      if (!keep_going) return false;
    }
    return true;
  }

  // Calls f on every strictly increasing index tuple from `start` whose b
  // sorts spell t's input sorts, leaving `reserve` positions after it.
  template <class F>
  bool for_each_tuple(const OrderlyTerm& t, std::size_t start, std::size_t reserve, F&& f) {
    const auto& ins = t.inputs();
    const std::size_t n = b_.values.size();
    if (n < reserve) return true;
    const std::size_t limit = n - reserve;  // indices must stay below limit
    std::vector<std::size_t> idx(ins.size());
    auto rec = [&](auto&& self, std::size_t k, std::size_t from) -> bool {
      if (k == ins.size()) return f(idx);
      const std::size_t left = ins.size() - k - 1;
      for (std::size_t i = from; i + left < limit; ++i) {
        if (b_.values[i].phylum() != ins[k]) continue;
        idx[k] = i;
        if (!self(self, k + 1, i + 1)) return false;
      }
      return true;
    };
    return rec(rec, 0, start);
  }

  void push(const OrderlyTerm& t, std::vector<std::size_t> idx, Value v) {
    values_.push_back(std::move(v));
    entries_.push_back({t, std::move(idx)});
  }
  void pop() {
    values_.pop_back();
    entries_.pop_back();
  }

 private:
  const Signature& sig_;
  const TermCatalog& cat_;
  const SortedPrefix& b_;
  const SortWord& e_;
  std::size_t target_;
  std::optional<std::size_t> exact_;
  SearchStats* stats_;
  std::vector<Value> values_;
  std::vector<WitnessEntry> entries_;
};

std::size_t effective_arity(ReductionBounds bounds, const SortedPrefix& b) {
  return bounds.max_arity == 0 ? std::max<std::size_t>(b.values.size(), 1) : bounds.max_arity;
}

}  // namespace

bool enumerate_reductions(const Signature& sig, const TermCatalog& catalog, const SortedPrefix& b, const SortWord& e,
                          std::size_t target_len, const ReductionVisitor& visit,
                          std::optional<std::size_t> exact_total_size, SearchStats* stats) {
  if (target_len < 1) throw PreconditionError("target length must be at least 1");
  for (std::size_t j = 0; j < target_len; ++j)
    if (!sig.valid_sort(e.at(j))) throw PreconditionError("sort word refers to an unknown phylum");
  ReductionSearch search(sig, catalog, b, e, target_len, exact_total_size, stats);
  return search.dfs(0, 0, 0, visit);
}

bool enumerate_reductions(const Signature& sig, const SortedPrefix& b, const SortWord& e, std::size_t target_len,
                          ReductionBounds bounds, const ReductionVisitor& visit) {
  TermCatalog catalog(sig, effective_arity(bounds, b), bounds.max_term_size);
  return enumerate_reductions(sig, catalog, b, e, target_len, visit);
}

std::vector<std::pair<SortedPrefix, ReductionWitness>> collect_reductions(const Signature& sig, const SortedPrefix& b,
                                                                          const SortWord& e, std::size_t target_len,
                                                                          ReductionBounds bounds) {
  std::vector<std::pair<SortedPrefix, ReductionWitness>> out;
  enumerate_reductions(sig, b, e, target_len, bounds, [&](const SortedPrefix& a, const ReductionWitness& w) {
    out.emplace_back(a, w);
    return true;
  });
  return out;
}

std::size_t fr_target_len(const Signature& sig, const SortWord& e) {
  const OmegaClass c = omega_class(e, sig.num_phyla());
  if (in_omega(c)) return 1;
  return std::get<NotInOmega>(c).last_finite + 2;
}

FRSet fr_set(const Signature& sig, const TermCatalog& catalog, const SortedPrefix& b, const SortWord& e,
             SearchStats* stats) {
  if (b.values.empty()) throw PreconditionError("fr_set needs a nonempty prefix");
  FRSet out;
  out.bounds = {catalog.max_size(), catalog.max_arity()};
  out.target_len = fr_target_len(sig, e);
  out.truncated = out.target_len > 1;

  ReductionSearch search(sig, catalog, b, e, out.target_len, std::nullopt, stats);
  for (const OrderlyTerm& t : catalog.terms(e.at(0))) {
    search.for_each_tuple(t, 0, out.target_len - 1, [&](const std::vector<std::size_t>& idx) {
      std::vector<Value> args;
      for (std::size_t i : idx) args.push_back(b.values[i]);
      Value v = evaluate_unchecked(sig, t, args);
      if (out.elements.contains(v)) return true;
      search.push(t, idx, v);
      search.dfs(1, idx.back() + 1, t.size(), [&](const SortedPrefix&, const ReductionWitness& w) {
        out.elements.emplace(v, w);
        return false;
      });
      search.pop();
      return true;
    });
  }
  return out;
}

FRSet fr_set(const Signature& sig, const SortedPrefix& b, const SortWord& e, ReductionBounds bounds,
             SearchStats* stats) {
  TermCatalog catalog(sig, effective_arity(bounds, b), bounds.max_term_size);
  FRSet out = fr_set(sig, catalog, b, e, stats);
  out.bounds = bounds;
  return out;
}

ReductionBounds relaxed_fr_bounds(ReductionBounds fr, const ReductionWitness& w) {
  const std::size_t arity_fr = std::max<std::size_t>(fr.max_arity, 1);
  return {fr.max_term_size + arity_fr * w.max_term_size(), arity_fr * std::max<std::size_t>(w.max_arity(), 1)};
}

bool fr_monotone_check(const Signature& sig, const SortedPrefix& a_prime, const ReductionWitness& w,
                       const SortedPrefix& a, const SortWord& e, const SortWord& e_prime, ReductionBounds bounds) {
  if (e.at(0) != e_prime.at(0)) throw PreconditionError("head sorts differ");
  if (!in_omega(omega_class(e, sig.num_phyla()))) throw PreconditionError("the outer sort must lie in Omega");
  if (auto r = check_witness(sig, a_prime, a, w); !r) throw PreconditionError("a' is not a reduction of a: " + r.diagnostic);
  if (bounds.max_arity == 0) bounds.max_arity = std::max<std::size_t>(a_prime.values.size(), 1);
  const FRSet small = fr_set(sig, a_prime, e_prime, bounds);
  const FRSet big = fr_set(sig, a, e, relaxed_fr_bounds(bounds, w));
  for (const auto& [v, _] : small.elements)
    if (!big.contains(v)) return false;
  return true;
}

std::pair<SortedPrefix, std::vector<std::size_t>> sort_subsequence(const SortedPrefix& b, SortIndex sort) {
  std::pair<SortedPrefix, std::vector<std::size_t>> out{SortedPrefix{{}, SortWord::constant(sort)}, {}};
  for (std::size_t i = 0; i < b.values.size(); ++i)
    if (b.values[i].phylum() == sort) {
      out.first.values.push_back(b.values[i]);
      out.second.push_back(i);
    }
  return out;
}

bool has_disjoint_ops(const Signature& sig) {
  for (const OperationDef& o : sig.ops())
    for (SortIndex s : o.inputs)
      if (s != o.output) return false;
  return true;
}

}  // namespace ralg
