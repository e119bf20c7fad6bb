#include "ralg/unary.hpp"

#include <algorithm>
#include <deque>
#include <random>

#include "ralg/error.hpp"

namespace ralg {

std::vector<std::string> validate_unary(const UnaryAlgebra& alg) {
  std::vector<std::string> out;
  const std::size_t n = alg.carrier.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (alg.carrier[i] == alg.carrier[j]) out.push_back("carrier repeats element " + std::to_string(i));
  for (std::size_t k = 0; k < alg.ops.size(); ++k) {
    if (alg.ops[k].size() != n) {
      out.push_back("op " + std::to_string(k) + " is not total");
      continue;
    }
    for (std::size_t x : alg.ops[k])
      if (x >= n) out.push_back("op " + std::to_string(k) + " leaves the carrier");
  }
  return out;
}

UnaryAlgebra unary_algebra_from_signature(const Signature& sig, SortIndex s) {
  UnaryAlgebra alg;
  alg.carrier = sig.elements(s);
  for (std::size_t k = 0; k < sig.num_ops(); ++k) {
    const OperationDef& o = sig.op(k);
    if (o.arity() != 1 || o.inputs[0] != s || o.output != s) continue;
    std::vector<std::size_t> images;
    for (const Value& v : alg.carrier) images.push_back(sig.element_index(sig.apply(k, std::vector<Value>{v})));
    alg.ops.push_back(std::move(images));
  }
  return alg;
}

std::vector<std::size_t> fixed_point_indices(const UnaryAlgebra& alg) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < alg.carrier.size(); ++i)
    if (std::all_of(alg.ops.begin(), alg.ops.end(), [i](const auto& f) { return f[i] == i; })) out.push_back(i);
  return out;
}

std::vector<Value> fixed_point_set(const UnaryAlgebra& alg) {
  std::vector<Value> out;
  for (std::size_t i : fixed_point_indices(alg)) out.push_back(alg.carrier[i]);
  return out;
}

UnaryClassification unary_ramsey_classification(const UnaryAlgebra& alg) {
  const std::size_t n = alg.carrier.size();
  std::vector<std::vector<std::size_t>> preimages(n);
  for (const auto& f : alg.ops)
    for (std::size_t i = 0; i < n; ++i) preimages[f[i]].push_back(i);

  UnaryClassification out;
  std::vector<bool> reaches(n, false);
  std::deque<std::size_t> queue;
  for (std::size_t i : fixed_point_indices(alg)) {
    out.fixed.push_back(alg.carrier[i]);
    reaches[i] = true;
    queue.push_back(i);
  }
  while (!queue.empty()) {
    const std::size_t y = queue.front();
    queue.pop_front();
    for (std::size_t x : preimages[y])
      if (!reaches[x]) {
        reaches[x] = true;
        queue.push_back(x);
      }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!reaches[i]) out.unreachable.push_back(alg.carrier[i]);
  out.is_ramsey = out.unreachable.empty();
  return out;
}

ThreePartition katetov_partition(const std::vector<std::size_t>& T) {
  const std::size_t n = T.size();
  for (std::size_t x = 0; x < n; ++x) {
    if (T[x] >= n) throw PreconditionError("map leaves the carrier at element " + std::to_string(x));
    if (T[x] == x) throw PreconditionError("map has a fixed point at element " + std::to_string(x));
  }
  constexpr std::uint8_t kNone = 3;
  std::vector<std::uint8_t> color(n, kNone);

  // 0 = unvisited, 1 = on the current walk, 2 = finished.
  std::vector<std::uint8_t> state(n, 0);
  std::vector<std::size_t> walk;
  for (std::size_t start = 0; start < n; ++start) {
    if (state[start] != 0) continue;
    walk.clear();
    std::size_t x = start;
    while (state[x] == 0) {
      state[x] = 1;
      walk.push_back(x);
      x = T[x];
    }
    if (state[x] == 1) {
      const auto it = std::find(walk.begin(), walk.end(), x);
      const std::size_t len = static_cast<std::size_t>(walk.end() - it);
      for (std::size_t k = 0; k < len; ++k) color[*(it + static_cast<std::ptrdiff_t>(k))] = k % 2;
      if (len % 2 == 1) color[walk.back()] = 2;
    }
    for (std::size_t y : walk) state[y] = 2;
  }

  std::vector<std::vector<std::size_t>> preimages(n);
  for (std::size_t x = 0; x < n; ++x) preimages[T[x]].push_back(x);
  std::deque<std::size_t> queue;
  for (std::size_t x = 0; x < n; ++x)
    if (color[x] != kNone) queue.push_back(x);
  while (!queue.empty()) {
    const std::size_t y = queue.front();
    queue.pop_front();
    for (std::size_t x : preimages[y])
      if (color[x] == kNone) {
        color[x] = color[y] == 0 ? 1 : 0;
        queue.push_back(x);
      }
  }

  ThreePartition out;
  out.cell = std::move(color);
  for (std::size_t x = 0; x < n; ++x) out.parts[out.cell[x]].push_back(x);
  if (!verify_three_partition(T, out)) throw Error("katetov partition failed its postcondition scan");
  return out;
}

bool verify_three_partition(const std::vector<std::size_t>& T, const ThreePartition& p) {
  const std::size_t n = T.size();
  if (p.cell.size() != n) return false;
  std::vector<int> seen(n, -1);
  std::size_t count = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t x : p.parts[i]) {
      if (x >= n || seen[x] != -1 || p.cell[x] != i) return false;
      seen[x] = static_cast<int>(i);
      ++count;
    }
  if (count != n) return false;
  for (std::size_t x = 0; x < n; ++x)
    if (p.cell[x] == p.cell[T[x]]) return false;
  return true;
}

ThreePartition premprop_partition(const UnaryAlgebra& alg, const std::vector<std::size_t>& S, std::size_t a0) {
  const std::size_t n = alg.carrier.size();
  if (a0 >= n) throw PreconditionError("a0 is not in the carrier");
  std::vector<bool> in_s(n, false);
  for (std::size_t i : S) {
    if (i >= n) throw PreconditionError("S is not a subset of the carrier");
    in_s[i] = true;
  }
  std::vector<std::size_t> T(n + 1);
  const std::size_t alpha = n;
  for (std::size_t a = 0; a < n; ++a) {
    if (in_s[a]) {
      T[a] = alpha;
      continue;
    }
    auto mover = std::find_if(alg.ops.begin(), alg.ops.end(), [a](const auto& f) { return f[a] != a; });
    if (mover == alg.ops.end())
      throw PreconditionError("element " + std::to_string(a) + " lies outside S but no operation moves it");
    T[a] = (*mover)[a];
  }
  T[alpha] = a0;

  const ThreePartition full = katetov_partition(T);
  ThreePartition out;
  out.cell.assign(full.cell.begin(), full.cell.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t x = 0; x < n; ++x) out.parts[out.cell[x]].push_back(x);
  return out;
}

bool verify_premprop_guarantee(const UnaryAlgebra& alg, const std::vector<std::size_t>& S, const ThreePartition& q) {
  const std::size_t n = alg.carrier.size();
  std::vector<bool> in_s(n, false);
  for (std::size_t i : S) in_s[i] = true;
  for (std::size_t a = 0; a < n; ++a) {
    if (in_s[a]) continue;
    const bool exits =
        std::any_of(alg.ops.begin(), alg.ops.end(), [&](const auto& f) { return q.cell[f[a]] != q.cell[a]; });
    if (!exits) return false;
  }
  return true;
}

std::vector<std::size_t> random_fixed_point_free_map(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw PreconditionError("a fixed-point-free map needs at least two points");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 2);
  std::vector<std::size_t> T(n);
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t r = pick(rng);
    T[x] = r >= x ? r + 1 : r;
  }
  return T;
}

}  // namespace ralg
