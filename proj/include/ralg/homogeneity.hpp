#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ralg/reduction.hpp"

namespace ralg {

/// A finite partition of one phylum into num_colors cells.
struct Coloring {
  SortIndex phylum;
  std::size_t num_colors = 2;
  std::function<std::size_t(const Value&)> classify;
  std::string description;

  /// Throws PreconditionError for values outside the phylum or colors out of range.
  std::size_t color(const Value& v) const;
};

/// Coloring of a finite phylum by a table indexed by element index.
Coloring table_coloring(const Signature& sig, SortIndex phylum, std::vector<std::size_t> colors,
                        std::size_t num_colors);
/// Two cells: members of the set get color 0, everything else color 1.
Coloring membership_coloring(SortIndex phylum, std::function<bool(const Value&)> member, std::string description);

/// The common color of all elements, or nullopt when two colors occur.
std::optional<std::size_t> monochromatic_color(const FRSet& fr, const Coloring& c);

struct HomogeneityBounds {
  ReductionBounds reduction{1, 0};
  ReductionBounds fr{2, 0};
};

struct Found {
  SortedPrefix a;
  ReductionWitness witness;
  std::size_t color = 0;
};
struct Exhausted {};

struct HomogeneityReport {
  std::variant<Found, Exhausted> outcome = Exhausted{};
  HomogeneityBounds bounds;
  SearchStats stats;

  bool found() const { return std::holds_alternative<Found>(outcome); }
  const Found& result() const { return std::get<Found>(outcome); }
};

/// Iterative deepening on the total witness term size, lexicographic within a
/// size; the first reduction whose FR set is monochromatic wins.
HomogeneityReport find_homogeneous(const Signature& sig, const SortedPrefix& b, const SortWord& e, const Coloring& c,
                                   std::size_t target_len, const HomogeneityBounds& bounds);

/// A reduction built by an explicit construction. When the prefix ran out,
/// `exhaustion` explains why and a/witness hold the partial output.
struct ConstructedReduction {
  SortedPrefix a;
  ReductionWitness witness;
  std::optional<std::string> exhaustion;
};

/// e-sorted reduction of b whose scalar entries are s-fold sums of rho (hence
/// s.rho) and whose vector entries are copied from b in order. With target_len
/// unset the reduction is taken as long as the prefix allows.
ConstructedReduction zero_scalar_reduction(const Signature& sig, const SortedPrefix& b, const SortWord& e,
                                           const Value& rho, std::size_t s,
                                           std::optional<std::size_t> target_len = std::nullopt);

/// Interleaves a reduction alpha of the eta-subsequence of b (given by its
/// witness blocks, indices into b) with copies of b's other-sort terms,
/// following e. Blocks of alpha that start before the current position are
/// skipped. With target_len unset it stops cleanly when alpha runs out.
ConstructedReduction merge_sorted_reduction(const Signature& sig, const SortedPrefix& alpha, const SortedPrefix& b,
                                            const SortWord& e, const std::vector<WitnessEntry>& eta_witnesses,
                                            std::optional<std::size_t> target_len = std::nullopt);

struct HindmanBounds {
  /// Largest term size per block; a block has at most max_block_size + 1 elements.
  std::size_t max_block_size = 1;
  /// Largest term size used for FR sums.
  std::size_t fr_max_term_size = 2;
};

/// Homogeneity search in a semigroup (op must be an associative binary
/// operation on b's phylum). Candidates are block sums; FR sets are finite
/// sums. Values in also_in_fr must share the FR color.
HomogeneityReport hindman_search(const Signature& sig, std::size_t op, const SortedPrefix& b, const Coloring& c,
                                 std::size_t target_len, const HindmanBounds& bounds,
                                 const std::vector<Value>& also_in_fr = {});

/// Left-nested op(op(x1, x2), ...) over k leaves of the op's sort.
OrderlyTerm block_sum_term(const Signature& sig, std::size_t op, std::size_t k);

}  // namespace ralg
