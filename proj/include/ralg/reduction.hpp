#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ralg/signature.hpp"
#include "ralg/sort_word.hpp"
#include "ralg/term.hpp"

namespace ralg {

/// A finite sequence of values together with the infinite sort it follows.
struct SortedPrefix {
  std::vector<Value> values;
  SortWord sort;

  std::size_t size() const { return values.size(); }
};

/// Empty when every values[i] lies in phylum sort(i).
std::vector<std::string> validate_prefix(const Signature& sig, const SortedPrefix& p);

struct WitnessEntry {
  OrderlyTerm term;
  std::vector<std::size_t> indices;
};

/// Certifies a <=_F b: a(j) = entries[j].term(b at entries[j].indices), with
/// all index blocks together strictly increasing.
struct ReductionWitness {
  std::vector<WitnessEntry> entries;

  std::size_t total_size() const;
  std::size_t max_term_size() const;
  std::size_t max_arity() const;
};

ReductionWitness identity_witness(std::size_t length, const SortWord& sort);

struct CheckResult {
  bool ok = true;
  std::string diagnostic;

  explicit operator bool() const { return ok; }
};

CheckResult check_witness(const Signature& sig, const SortedPrefix& a, const SortedPrefix& b,
                          const ReductionWitness& w);

/// Given outer certifying c <=_F a and inner certifying a <=_F b, a witness
/// certifying c <=_F b.
ReductionWitness compose_witnesses(const Signature& sig, const ReductionWitness& outer, const ReductionWitness& inner);

struct ReductionBounds {
  std::size_t max_term_size = 1;
  /// 0 means "bounded only by the prefix length".
  std::size_t max_arity = 0;
};

struct SearchStats {
  std::size_t nodes = 0;
  std::size_t max_depth = 0;
};

/// Called once per reduction in stream order; return false to stop.
using ReductionVisitor = std::function<bool(const SortedPrefix&, const ReductionWitness&)>;

/// Every e-sorted a of length target_len with a <=_F b witnessed within the
/// catalog's bounds, in lexicographic order of (term, indices) per entry.
/// When exact_total_size is set only witnesses of that total term size are
/// produced. Returns false if the visitor stopped the stream.
bool enumerate_reductions(const Signature& sig, const TermCatalog& catalog, const SortedPrefix& b, const SortWord& e,
                          std::size_t target_len, const ReductionVisitor& visit,
                          std::optional<std::size_t> exact_total_size = std::nullopt, SearchStats* stats = nullptr);

bool enumerate_reductions(const Signature& sig, const SortedPrefix& b, const SortWord& e, std::size_t target_len,
                          ReductionBounds bounds, const ReductionVisitor& visit);

std::vector<std::pair<SortedPrefix, ReductionWitness>> collect_reductions(const Signature& sig, const SortedPrefix& b,
                                                                          const SortWord& e, std::size_t target_len,
                                                                          ReductionBounds bounds);

struct FRSet {
  /// Each element with the least witness producing it at position 0.
  std::map<Value, ReductionWitness> elements;
  ReductionBounds bounds;
  /// Length of the reductions enumerated (1 when the sort lies in Omega).
  std::size_t target_len = 1;
  /// True when the sort is outside Omega and the infinite reduction was truncated.
  bool truncated = false;

  bool contains(const Value& v) const { return elements.contains(v); }
};

FRSet fr_set(const Signature& sig, const SortedPrefix& b, const SortWord& e, ReductionBounds bounds,
             SearchStats* stats = nullptr);
FRSet fr_set(const Signature& sig, const TermCatalog& catalog, const SortedPrefix& b, const SortWord& e,
             SearchStats* stats = nullptr);

/// Reduction target length used by fr_set for e: 1 inside Omega, otherwise
/// two past the last position whose sort occurs finitely often.
std::size_t fr_target_len(const Signature& sig, const SortWord& e);

/// Bounds under which FR(a', e') is guaranteed to lie inside FR(a, e) when
/// a' <=_F a is certified by w.
ReductionBounds relaxed_fr_bounds(ReductionBounds fr, const ReductionWitness& w);

/// Checks FR(a', e') within bounds is a subset of FR(a, e) within the relaxed
/// bounds. Throws PreconditionError on a head-sort mismatch, on e outside
/// Omega, or when w does not certify a' <=_F a.
bool fr_monotone_check(const Signature& sig, const SortedPrefix& a_prime, const ReductionWitness& w,
                       const SortedPrefix& a, const SortWord& e, const SortWord& e_prime, ReductionBounds bounds);

/// The values of b at positions of the given sort, with their positions.
std::pair<SortedPrefix, std::vector<std::size_t>> sort_subsequence(const SortedPrefix& b, SortIndex sort);

/// True when every operation maps one phylum into itself, so that F splits
/// into the disjoint families G_xi.
bool has_disjoint_ops(const Signature& sig);

}  // namespace ralg
