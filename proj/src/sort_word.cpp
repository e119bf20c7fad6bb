#include "ralg/sort_word.hpp"

#include <algorithm>
#include <set>

#include "ralg/error.hpp"

namespace ralg {

SortWord::SortWord(std::vector<SortIndex> prefix, std::vector<SortIndex> period)
    : prefix_(std::move(prefix)), period_(std::move(period)) {
  if (period_.empty()) throw PreconditionError("sort word period must be nonempty");

  const std::size_t n = period_.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = period_[i] == period_[i - d];
    if (ok) {
      period_.resize(d);
      break;
    }
  }

  while (!prefix_.empty() && prefix_.back() == period_.back()) {
    std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
    prefix_.pop_back();
  }
}

SortIndex SortWord::at(std::size_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  return period_[(i - prefix_.size()) % period_.size()];
}

SortWord SortWord::shifted(std::size_t n) const {
  if (n <= prefix_.size())
    return SortWord(std::vector<SortIndex>(prefix_.begin() + static_cast<std::ptrdiff_t>(n), prefix_.end()), period_);
  const std::size_t r = (n - prefix_.size()) % period_.size();
  std::vector<SortIndex> per(period_.begin() + static_cast<std::ptrdiff_t>(r), period_.end());
  per.insert(per.end(), period_.begin(), period_.begin() + static_cast<std::ptrdiff_t>(r));
  return SortWord({}, std::move(per));
}

std::string SortWord::to_string() const {
  auto list = [](const std::vector<SortIndex>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) s += ' ';
      s += std::to_string(v[i].id);
    }
    return s + "]";
  };
  return "prefix " + list(prefix_) + " period " + list(period_);
}

OmegaClass omega_class(const SortWord& e, std::size_t num_phyla) {
  for (SortIndex s : e.prefix())
    if (s.id >= num_phyla) throw PreconditionError("sort index " + std::to_string(s.id) + " out of range");
  for (SortIndex s : e.period())
    if (s.id >= num_phyla) throw PreconditionError("sort index " + std::to_string(s.id) + " out of range");

  const std::set<SortIndex> recurring(e.period().begin(), e.period().end());
  std::optional<std::size_t> last_finite;
  for (std::size_t i = 0; i < e.prefix().size(); ++i)
    if (!recurring.contains(e.prefix()[i])) last_finite = i;

  if (!last_finite) return InOmega{e.at(0), std::vector<SortIndex>(recurring.begin(), recurring.end())};

  NotInOmega out;
  out.last_finite = *last_finite;
  if (e.period().size() == 1) {
    out.n_star = e.prefix().size() - 1;
    out.eventual_value = e.period().front();
  }
  return out;
}

}  // namespace ralg
