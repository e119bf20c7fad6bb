#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace ralg {

/// Names one phylum of a Signature.
struct SortIndex {
  std::uint32_t id = 0;

  friend auto operator<=>(const SortIndex&, const SortIndex&) = default;
};

}  // namespace ralg

template <>
struct std::hash<ralg::SortIndex> {
  std::size_t operator()(ralg::SortIndex s) const noexcept { return std::hash<std::uint32_t>{}(s.id); }
};
