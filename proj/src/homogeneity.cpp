#include "ralg/homogeneity.hpp"

#include <algorithm>
#include <memory>

#include "ralg/error.hpp"

namespace ralg {

std::size_t Coloring::color(const Value& v) const {
  if (v.phylum() != phylum) throw PreconditionError("coloring applied outside its phylum");
  const std::size_t k = classify(v);
  if (k >= num_colors) throw PreconditionError("coloring returned color " + std::to_string(k) + " of " +
                                               std::to_string(num_colors));
  return k;
}

Coloring table_coloring(const Signature& sig, SortIndex phylum, std::vector<std::size_t> colors,
                        std::size_t num_colors) {
  auto card = sig.cardinality(phylum);
  if (!card || *card != colors.size()) throw PreconditionError("color table does not cover the phylum");
  for (std::size_t k : colors)
    if (k >= num_colors) throw PreconditionError("color table entry out of range");
  std::string desc = "table[";
  for (std::size_t i = 0; i < colors.size(); ++i) desc += (i > 0 ? " " : "") + std::to_string(colors[i]);
  desc += "]";
  auto owned = std::make_shared<const Signature>(sig);
  return Coloring{phylum, num_colors,
                  [owned, colors = std::move(colors)](const Value& v) { return colors[owned->element_index(v)]; },
                  std::move(desc)};
}

Coloring membership_coloring(SortIndex phylum, std::function<bool(const Value&)> member, std::string description) {
  return Coloring{phylum, 2, [member = std::move(member)](const Value& v) -> std::size_t { return member(v) ? 0 : 1; },
                  std::move(description)};
}

std::optional<std::size_t> monochromatic_color(const FRSet& fr, const Coloring& c) {
  std::optional<std::size_t> col;
  for (const auto& [v, _] : fr.elements) {
    const std::size_t k = c.color(v);
    if (col && *col != k) return std::nullopt;
    col = k;
  }
  return col;
}

HomogeneityReport find_homogeneous(const Signature& sig, const SortedPrefix& b, const SortWord& e, const Coloring& c,
                                   std::size_t target_len, const HomogeneityBounds& bounds) {
  if (c.phylum != e.at(0)) throw PreconditionError("coloring is not defined on the head phylum of the sort");
  HomogeneityReport report;
  report.bounds = bounds;
  ReductionBounds red = bounds.reduction;
  if (red.max_arity == 0) red.max_arity = std::max<std::size_t>(b.values.size(), 1);
  ReductionBounds frb = bounds.fr;
  if (frb.max_arity == 0) frb.max_arity = std::max<std::size_t>(target_len, 1);
  report.bounds = {red, frb};

  const TermCatalog red_catalog(sig, red.max_arity, red.max_term_size);
  const TermCatalog fr_catalog(sig, frb.max_arity, frb.max_term_size);
  for (std::size_t depth = 0; depth <= target_len * red.max_term_size; ++depth) {
    std::optional<Found> hit;
    enumerate_reductions(
        sig, red_catalog, b, e, target_len,
        [&](const SortedPrefix& a, const ReductionWitness& w) {
          const FRSet fr = fr_set(sig, fr_catalog, a, e, &report.stats);
          if (auto col = monochromatic_color(fr, c)) {
            hit = Found{a, w, *col};
            return false;
          }
          return true;
        },
        depth, &report.stats);
    if (hit) {
      report.outcome = std::move(*hit);
      return report;
    }
  }
  return report;
}

ConstructedReduction zero_scalar_reduction(const Signature& sig, const SortedPrefix& b, const SortWord& e,
                                           const Value& rho, std::size_t s, std::optional<std::size_t> target_len) {
  if (s < 1) throw PreconditionError("s must be positive");
  const SortIndex field = rho.phylum();
  if (!sig.is_field(field) || !sig.field_of(field).is_finite())
    throw PreconditionError("rho must be an element of a prime field phylum");
  const Field F = sig.field_of(field);
  Scalar acc = F.zero();
  for (std::size_t k = 0; k < s; ++k) acc = F.add(acc, rho.as_scalar());
  if (!F.is_zero(acc)) throw PreconditionError("s.rho is not zero");
  std::optional<std::size_t> add_op;
  if (s > 1) {
    add_op = sig.find_builtin(Builtin::FieldAdd, field);
    if (!add_op) throw PreconditionError("the signature has no field addition");
  }
  const OrderlyTerm scalar_term = s == 1 ? OrderlyTerm::leaf(field) : block_sum_term(sig, *add_op, s);

  ConstructedReduction out{SortedPrefix{{}, e}, {}, std::nullopt};
  std::size_t cursor = 0;
  for (std::size_t j = 0; !target_len || j < *target_len; ++j) {
    const SortIndex want = e.at(j);
    std::vector<std::size_t> idx;
    if (want == field) {
      for (std::size_t i = cursor; i < b.values.size() && idx.size() < s; ++i)
        if (b.values[i] == rho) idx.push_back(i);
      if (idx.size() < s) {
        if (target_len) {
          std::size_t needed = s - idx.size();
          for (std::size_t jj = j + 1; jj < *target_len; ++jj)
            if (e.at(jj) == field) needed += s;
          out.exhaustion = "position " + std::to_string(j) + ": needs " + std::to_string(needed) +
                           " more occurrences of " + sig.format(rho);
        }
        return out;
      }
      out.a.values.push_back(Value::scalar(field, acc));
      out.witness.entries.push_back({scalar_term, idx});
    } else {
      for (std::size_t i = cursor; i < b.values.size(); ++i)
        if (b.values[i].phylum() == want) {
          idx.push_back(i);
          break;
        }
      if (idx.empty()) {
        if (target_len) out.exhaustion = "position " + std::to_string(j) + ": no term of phylum " +
                                         sig.phylum(want).name + " left in b";
        return out;
      }
      out.a.values.push_back(b.values[idx[0]]);
      out.witness.entries.push_back({OrderlyTerm::leaf(want), idx});
    }
    cursor = idx.back() + 1;
  }
  return out;
}

ConstructedReduction merge_sorted_reduction(const Signature& sig, const SortedPrefix& alpha, const SortedPrefix& b,
                                            const SortWord& e, const std::vector<WitnessEntry>& eta_witnesses,
                                            std::optional<std::size_t> target_len) {
  if (alpha.values.size() != eta_witnesses.size()) throw PreconditionError("alpha and its witnesses differ in length");
  const SortIndex eta = e.at(0);
  ConstructedReduction out{SortedPrefix{{}, e}, {}, std::nullopt};
  std::optional<std::size_t> last;
  std::size_t next_alpha = 0;
  for (std::size_t j = 0; !target_len || j < *target_len; ++j) {
    const SortIndex want = e.at(j);
    if (want == eta) {
      while (next_alpha < eta_witnesses.size() && last && eta_witnesses[next_alpha].indices.front() <= *last)
        ++next_alpha;
      if (next_alpha == eta_witnesses.size()) {
        if (target_len) out.exhaustion = "position " + std::to_string(j) + ": alpha blocks exhausted";
        return out;
      }
      const WitnessEntry& en = eta_witnesses[next_alpha];
      out.a.values.push_back(alpha.values[next_alpha]);
      out.witness.entries.push_back(en);
      last = en.indices.back();
      ++next_alpha;
    } else {
      std::optional<std::size_t> pick;
      for (std::size_t i = last ? *last + 1 : 0; i < b.values.size(); ++i)
        if (b.values[i].phylum() == want) {
          pick = i;
          break;
        }
      if (!pick) {
        if (target_len) out.exhaustion = "position " + std::to_string(j) + ": no term of phylum " +
                                         sig.phylum(want).name + " left in b";
        return out;
      }
      out.a.values.push_back(b.values[*pick]);
      out.witness.entries.push_back({OrderlyTerm::leaf(want), {*pick}});
      last = pick;
    }
  }
  return out;
}

OrderlyTerm block_sum_term(const Signature& sig, std::size_t op, std::size_t k) {
  const SortIndex s = sig.op(op).output;
  OrderlyTerm t = OrderlyTerm::leaf(s);
  for (std::size_t i = 1; i < k; ++i) t = OrderlyTerm::node(sig, op, {t, OrderlyTerm::leaf(s)});
  return t;
}

namespace {

void require_semigroup(const Signature& sig, std::size_t op, const SortedPrefix& b) {
  const OperationDef& def = sig.op(op);
  if (def.arity() != 2 || def.inputs[0] != def.output || def.inputs[1] != def.output)
    throw PreconditionError("operation " + def.name + " is not a binary operation on one phylum");
  for (const Value& v : b.values)
    if (v.phylum() != def.output) throw PreconditionError("b does not lie in the semigroup's phylum");
  std::vector<Value> sample;
  auto card = sig.cardinality(def.output);
  if (card && *card <= 64)
    sample = sig.elements(def.output);
  else
    sample.assign(b.values.begin(), b.values.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(b.values.size(), 12)));
  for (const Value& x : sample)
    for (const Value& y : sample) {
      const Value xy = sig.apply_unchecked(op, std::vector<Value>{x, y});
      for (const Value& z : sample) {
        const Value l = sig.apply_unchecked(op, std::vector<Value>{xy, z});
        const Value r = sig.apply_unchecked(op, std::vector<Value>{x, sig.apply_unchecked(op, std::vector<Value>{y, z})});
        if (!(l == r)) throw PreconditionError("operation " + def.name + " is not associative");
      }
    }
}

}  // namespace

HomogeneityReport hindman_search(const Signature& sig, std::size_t op, const SortedPrefix& b, const Coloring& c,
                                 std::size_t target_len, const HindmanBounds& bounds,
                                 const std::vector<Value>& also_in_fr) {
  if (target_len < 1) throw PreconditionError("target length must be at least 1");
  require_semigroup(sig, op, b);
  const SortIndex s = sig.op(op).output;
  if (c.phylum != s) throw PreconditionError("coloring is not defined on the semigroup's phylum");

  HomogeneityReport report;
  report.bounds = {{bounds.max_block_size, bounds.max_block_size + 1},
                   {bounds.fr_max_term_size, bounds.fr_max_term_size + 1}};
  const std::size_t n = b.values.size();
  const std::size_t max_block = bounds.max_block_size + 1;
  const std::size_t max_fr = bounds.fr_max_term_size + 1;
  auto plus = [&](const Value& x, const Value& y) { return sig.apply_unchecked(op, std::vector<Value>{x, y}); };

  std::vector<Value> values;
  std::vector<WitnessEntry> entries;

  // Colors of the finite sums of `values`, at most max_fr summands each.
  auto homogeneous_color = [&]() -> std::optional<std::size_t> {
    std::optional<std::size_t> col;
    auto note = [&](const Value& v) {
      const std::size_t k = c.color(v);
      if (col && *col != k) return false;
      col = k;
      return true;
    };
    for (const Value& v : also_in_fr)
      if (!note(v)) return std::nullopt;
    auto rec = [&](auto&& self, std::size_t from, std::size_t used, const Value* acc) -> bool {
      for (std::size_t i = from; i < values.size(); ++i) {
        const Value v = acc == nullptr ? values[i] : plus(*acc, values[i]);
        if (!note(v)) return false;
        if (used + 1 < max_fr && !self(self, i + 1, used + 1, &v)) return false;
      }
      return true;
    };
    if (!rec(rec, 0, 0, nullptr)) return std::nullopt;
    return col;
  };

  std::optional<Found> hit;
  auto dfs = [&](auto&& self, std::size_t j, std::size_t start, std::size_t left) -> bool {
    ++report.stats.nodes;
    report.stats.max_depth = std::max(report.stats.max_depth, j);
    if (j == target_len) {
      if (left != 0) return true;
      if (auto col = homogeneous_color()) {
        hit = Found{SortedPrefix{values, SortWord::constant(s)}, ReductionWitness{entries}, *col};
        return false;
      }
      return true;
    }
    const std::size_t reserve = target_len - j - 1;
    for (std::size_t k = 1; k <= max_block && k - 1 <= left; ++k) {
      const OrderlyTerm term = block_sum_term(sig, op, k);
      std::vector<std::size_t> idx(k);
      auto choose = [&](auto&& pick, std::size_t m, std::size_t from, const Value* acc) -> bool {
        if (m == k) {
          values.push_back(*acc);
          entries.push_back({term, idx});
          const bool go = self(self, j + 1, idx.back() + 1, left - (k - 1));
          values.pop_back();
          entries.pop_back();
          return go;
        }
        for (std::size_t i = from; i + (k - m - 1) + reserve < n; ++i) {
          idx[m] = i;
          const Value v = acc == nullptr ? b.values[i] : plus(*acc, b.values[i]);
          if (!pick(pick, m + 1, i + 1, &v)) return false;
        }
        return true;
      };
      if (!choose(choose, 0, start, nullptr)) return false;
    }
    return true;
  };

  for (std::size_t depth = 0; depth <= target_len * bounds.max_block_size; ++depth) {
    dfs(dfs, 0, 0, depth);
    if (hit) {
      report.outcome = std::move(*hit);
      return report;
    }
  }
  return report;
}

}  // namespace ralg
