#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ralg/sort_index.hpp"

namespace ralg {

/// An eventually periodic infinite sort: prefix followed by period repeated
/// forever. Always stored in canonical form (primitive period, shortest prefix).
class SortWord {
 public:
  SortWord() : period_{SortIndex{0}} {}
  /// Throws PreconditionError if the period is empty.
  SortWord(std::vector<SortIndex> prefix, std::vector<SortIndex> period);

  static SortWord constant(SortIndex s) { return SortWord({}, {s}); }

  const std::vector<SortIndex>& prefix() const { return prefix_; }
  const std::vector<SortIndex>& period() const { return period_; }

  SortIndex at(std::size_t i) const;
  bool is_constant() const { return prefix_.empty() && period_.size() == 1; }

  /// The sort i -> e(i + n).
  SortWord shifted(std::size_t n) const;

  std::string to_string() const;

  friend bool operator==(const SortWord&, const SortWord&) = default;

 private:
  std::vector<SortIndex> prefix_;
  std::vector<SortIndex> period_;
};

inline SortIndex sort_at(const SortWord& e, std::size_t i) { return e.at(i); }

struct InOmega {
  SortIndex head;
  std::vector<SortIndex> index_set;  // sorted
};

struct NotInOmega {
  /// Least n* with e shifted by n*+1 constant; absent when the tail is not constant.
  std::optional<std::size_t> n_star;
  /// The constant tail value, when the tail is constant.
  std::optional<SortIndex> eventual_value;
  /// Greatest position whose sort occurs only finitely often in e.
  std::size_t last_finite = 0;
};

using OmegaClass = std::variant<InOmega, NotInOmega>;

/// Throws PreconditionError if some index of e is not below num_phyla.
OmegaClass omega_class(const SortWord& e, std::size_t num_phyla);

inline bool in_omega(const OmegaClass& c) { return std::holds_alternative<InOmega>(c); }

}  // namespace ralg
