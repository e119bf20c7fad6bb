#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "ralg/error.hpp"
#include "ralg/vspace.hpp"

namespace ralg {

namespace {

constexpr std::uint64_t kMod = (std::uint64_t{1} << 61) - 1;

std::uint64_t mod_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= kMod ? s - kMod : s;
}
std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(p & kMod);
  std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
  return mod_add(lo, hi);
}
std::uint64_t to_mod(const BigInt& x) { return static_cast<std::uint64_t>(x % kMod); }

// Terms over {+F (op 0), *F (op 1)} grouped by arity; with binary operations
// the arity of a term is its size plus one.
std::vector<std::vector<OrderlyTerm>> terms_by_arity(const Signature& fsig, std::size_t bound) {
  std::vector<std::vector<OrderlyTerm>> out(bound + 2);
  for (const OrderlyTerm& t : enumerate_terms(fsig, SortIndex{0}, bound + 1, bound)) out[t.arity()].push_back(t);
  return out;
}

template <class T, class Add, class Mul>
T eval_ring(const OrderlyTerm& t, const std::vector<T>& args, std::size_t& pos, Add add, Mul mul) {
  if (t.is_leaf()) return args[pos++];
  T l = eval_ring(t.children()[0], args, pos, add, mul);
  T r = eval_ring(t.children()[1], args, pos, add, mul);
  return t.op() == 0 ? add(l, r) : mul(l, r);
}

BigInt eval_big(const OrderlyTerm& t, const std::vector<BigInt>& args) {
  std::size_t pos = 0;
  return eval_ring<BigInt>(
      t, args, pos, [](const BigInt& a, const BigInt& b) { return BigInt(a + b); },
      [](const BigInt& a, const BigInt& b) { return BigInt(a * b); });
}

struct Valued {
  BigInt exact;
  std::uint64_t mod = 0;
};

// Greedy builder state: per index subset the values of all bounded terms on
// it, the union of values over subsets of each prefix, and the sum-form and
// product-form value sets.
class BetaBuilder {
 public:
  BetaBuilder(std::size_t bound) : bound_(bound), fsig_(make_field_signature(Field::rationals())) {
    shapes_ = terms_by_arity(fsig_, bound);
    prefix_union_.emplace_back();
  }

  const std::vector<BigInt>& values() const { return beta_; }

  // Empty string when c can be appended; otherwise the violated constraint.
  std::string test(const BigInt& c) {
    if (std::find(beta_.begin(), beta_.end(), c) != beta_.end()) return "candidate repeats an earlier value";
    build_new_tables(c);
    const std::size_t k = beta_.size();

    std::vector<std::uint64_t> new_l;
    std::vector<std::uint64_t> new_r;
    for (const auto& [mask, vals] : fresh_) {
      const std::size_t m = lowest(mask);
      for (const Valued& u : prefix_union_[m])
        for (const Valued& v : vals) {
          const std::uint64_t sm = mod_add(u.mod, v.mod);
          const std::uint64_t pm = mod_mul(u.mod, v.mod);
          if (auto it = rhs_.find(sm); it != rhs_.end())
            for (const BigInt& x : it->second)
              if (x == u.exact + v.exact) return describe("sum", u.exact, v.exact, x, k);
          if (auto it = lhs_.find(pm); it != lhs_.end())
            for (const BigInt& x : it->second)
              if (x == u.exact * v.exact) return describe("product", u.exact, v.exact, x, k);
          new_l.push_back(sm);
          new_r.push_back(pm);
        }
    }
    std::sort(new_l.begin(), new_l.end());
    std::sort(new_r.begin(), new_r.end());
    std::vector<std::uint64_t> common;
    std::set_intersection(new_l.begin(), new_l.end(), new_r.begin(), new_r.end(), std::back_inserter(common));
    if (!common.empty()) {
      std::unordered_set<BigInt> sums;
      std::unordered_set<BigInt> prods;
      const std::unordered_set<std::uint64_t> hot(common.begin(), common.end());
      for (const auto& [mask, vals] : fresh_)
        for (const Valued& u : prefix_union_[lowest(mask)])
          for (const Valued& v : vals) {
            if (hot.contains(mod_add(u.mod, v.mod))) sums.insert(u.exact + v.exact);
            if (hot.contains(mod_mul(u.mod, v.mod))) prods.insert(u.exact * v.exact);
          }
      for (const BigInt& x : sums)
        if (prods.contains(x)) return "a new sum equals a new product: " + x.str();
    }
    return {};
  }

  // Commits the candidate last passed to test().
  void accept(const BigInt& c) {
    std::vector<Valued> added;
    std::unordered_set<BigInt> seen;
    for (const Valued& u : prefix_union_.back()) seen.insert(u.exact);
    for (const auto& [mask, vals] : fresh_) {
      for (const Valued& u : prefix_union_[lowest(mask)])
        for (const Valued& v : vals) {
          insert(lhs_, u.exact + v.exact);
          insert(rhs_, u.exact * v.exact);
        }
      for (const Valued& v : vals)
        if (seen.insert(v.exact).second) added.push_back(v);
    }
    std::vector<Valued> next = prefix_union_.back();
    next.insert(next.end(), added.begin(), added.end());
    prefix_union_.push_back(std::move(next));
    beta_.push_back(c);
  }

 private:
  static std::size_t lowest(std::uint64_t mask) { return static_cast<std::size_t>(__builtin_ctzll(mask)); }

  static void insert(std::unordered_map<std::uint64_t, std::vector<BigInt>>& m, BigInt x) {
    auto& slot = m[to_mod(x)];
    if (std::find(slot.begin(), slot.end(), x) == slot.end()) slot.push_back(std::move(x));
  }

  std::string describe(const char* kind, const BigInt& u, const BigInt& v, const BigInt& x, std::size_t k) const {
    return std::string("position ") + std::to_string(k) + ": a new " + kind + " of " + u.str() + " and " + v.str() +
           " collides with an existing value " + x.str();
  }

  // Tables for all index sets whose largest element is the new position.
  void build_new_tables(const BigInt& c) {
    fresh_.clear();
    const std::size_t k = beta_.size();
    std::vector<BigInt> extended = beta_;
    extended.push_back(c);
    // Subsets of earlier positions of size <= bound, smaller subsets first.
    std::vector<std::uint64_t> masks{0};
    for (std::size_t size = 1; size <= bound_; ++size)
      for (std::uint64_t m = 1; m < (std::uint64_t{1} << k); ++m)
        if (static_cast<std::size_t>(__builtin_popcountll(m)) == size) masks.push_back(m);
    for (std::uint64_t sub : masks) {
      const std::uint64_t mask = sub | (std::uint64_t{1} << k);
      std::vector<BigInt> args;
      for (std::size_t i = 0; i <= k; ++i)
        if (mask >> i & 1U) args.push_back(extended[i]);
      std::vector<Valued> vals;
      std::unordered_set<BigInt> seen;
      for (const OrderlyTerm& t : shapes_[args.size()]) {
        BigInt x = eval_big(t, args);
        if (seen.insert(x).second) vals.push_back({x, to_mod(x)});
      }
      fresh_.emplace_back(mask, std::move(vals));
    }
  }

  std::size_t bound_;
  Signature fsig_;
  std::vector<std::vector<OrderlyTerm>> shapes_;
  std::vector<BigInt> beta_;
  std::vector<std::pair<std::uint64_t, std::vector<Valued>>> fresh_;
  std::vector<std::vector<Valued>> prefix_union_;
  std::unordered_map<std::uint64_t, std::vector<BigInt>> lhs_;
  std::unordered_map<std::uint64_t, std::vector<BigInt>> rhs_;
};

}  // namespace

BetaSequence build_beta(std::size_t length, std::size_t term_bound, const BetaBuildOptions& options) {
  if (length < 2) throw PreconditionError("beta length must be at least 2");
  if (term_bound < 1) throw PreconditionError("term bound must be at least 1");
  if (length > 40) throw PreconditionError("beta length above 40 is not supported");
  BetaBuilder builder(term_bound);
  for (std::size_t k = 0; k < length; ++k) {
    BigInt c = 2;
    std::string last_failure;
    bool placed = false;
    for (std::size_t tries = 0; tries < options.budget; ++tries) {
      last_failure = builder.test(c);
      if (last_failure.empty()) {
        builder.accept(c);
        placed = true;
        break;
      }
      c = c < options.linear_limit ? BigInt(c + 1) : BigInt(c * 2);
    }
    if (!placed)
      throw ExhaustionError("beta construction stalled at position " + std::to_string(k) + " after " +
                            std::to_string(options.budget) + " candidates; last violated constraint: " + last_failure);
  }
  return BetaSequence{builder.values(), term_bound};
}

BetaVerification verify_beta(const BetaSequence& beta, std::size_t bound) {
  BetaVerification out;
  const std::size_t n = beta.values.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (beta.values[i] == beta.values[j])
        out.violations.push_back("beta(" + std::to_string(i) + ") = beta(" + std::to_string(j) + ")");

  const Signature fsig = make_field_signature(Field::rationals());
  const SortIndex F{0};
  std::vector<std::vector<OrderlyTerm>> by_arity(bound + 2);
  for (const OrderlyTerm& t : enumerate_terms(fsig, F, bound + 1, bound))
    if (t.arity() <= bound + 1) by_arity[t.arity()].push_back(t);

  // Values of every bounded term on every increasing index tuple.
  std::map<std::vector<std::size_t>, std::vector<Rational>> table;
  auto tuple_values = [&](const std::vector<std::size_t>& idx) -> const std::vector<Rational>& {
    auto it = table.find(idx);
    if (it != table.end()) return it->second;
    std::vector<Value> args;
    for (std::size_t i : idx) args.push_back(Value::scalar(F, Rational(beta.values[i])));
    std::vector<Rational> vals;
    for (const OrderlyTerm& t : by_arity[idx.size()])
      vals.push_back(std::get<Rational>(evaluate(fsig, t, args).as_scalar()));
    return table.emplace(idx, std::move(vals)).first->second;
  };

  std::unordered_map<Rational, std::string> lhs;
  std::unordered_set<Rational> rhs;
  std::vector<std::size_t> tuple;
  auto label = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::string s = "[";
    for (std::size_t i : a) s += " " + std::to_string(i);
    s += " |";
    for (std::size_t i : b) s += " " + std::to_string(i);
    return s + " ]";
  };
  auto visit = [&](auto&& self, std::size_t from) -> void {
    if (tuple.size() >= 2) {
      for (std::size_t cut = 1; cut < tuple.size(); ++cut) {
        if (cut > bound + 1 || tuple.size() - cut > bound + 1) continue;
        const std::vector<std::size_t> left(tuple.begin(), tuple.begin() + static_cast<std::ptrdiff_t>(cut));
        const std::vector<std::size_t> right(tuple.begin() + static_cast<std::ptrdiff_t>(cut), tuple.end());
        const auto lv = tuple_values(left);
        const auto& rv = tuple_values(right);
        for (const Rational& x : lv)
          for (const Rational& y : rv) {
            lhs.emplace(x + y, label(left, right));
            rhs.insert(x * y);
          }
      }
    }
    if (tuple.size() == 2 * (bound + 1)) return;
    for (std::size_t i = from; i < n; ++i) {
      tuple.push_back(i);
      self(self, i + 1);
      tuple.pop_back();
    }
  };
  visit(visit, 0);
  out.lhs_values = lhs.size();
  out.rhs_values = rhs.size();
  for (const auto& [x, where] : lhs)
    if (rhs.contains(x)) out.violations.push_back("sum over split " + where + " equals a product: " + x.str());
  std::sort(out.violations.begin(), out.violations.end());
  return out;
}

struct YMembership::Index {
  std::unordered_map<Rational, YWitness> sums;
};

YMembership::YMembership(BetaSequence beta, std::size_t term_bound)
    : beta_(std::move(beta)), bound_(term_bound), sig_(make_field_signature(Field::rationals())) {
  const SortIndex F{0};
  const std::size_t n = beta_.values.size();
  std::vector<std::vector<OrderlyTerm>> by_arity(bound_ + 2);
  for (const OrderlyTerm& t : enumerate_terms(sig_, F, bound_ + 1, bound_)) by_arity[t.arity()].push_back(t);

  std::map<std::vector<std::size_t>, std::vector<std::pair<Rational, const OrderlyTerm*>>> table;
  auto values = [&](const std::vector<std::size_t>& idx) -> const std::vector<std::pair<Rational, const OrderlyTerm*>>& {
    auto it = table.find(idx);
    if (it != table.end()) return it->second;
    std::vector<Value> args;
    for (std::size_t i : idx) args.push_back(Value::scalar(F, Rational(beta_.values[i])));
    std::vector<std::pair<Rational, const OrderlyTerm*>> vals;
    for (const OrderlyTerm& t : by_arity[idx.size()])
      vals.emplace_back(std::get<Rational>(evaluate_unchecked(sig_, t, args).as_scalar()), &t);
    return table.emplace(idx, std::move(vals)).first->second;
  };

  index_ = std::make_shared<Index>();
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  // Left blocks in lexicographic order, then right blocks after them.
  auto walk_right = [&](auto&& self, std::size_t from) -> void {
    if (!right.empty()) {
      const auto lv = values(left);
      const auto& rv = values(right);
      for (const auto& [x, f] : lv)
        for (const auto& [y, g] : rv) index_->sums.try_emplace(x + y, YWitness{*f, *g, left, right});
    }
    if (right.size() == bound_ + 1) return;
    for (std::size_t i = from; i < n; ++i) {
      right.push_back(i);
      self(self, i + 1);
      right.pop_back();
    }
  };
  auto walk_left = [&](auto&& self, std::size_t from) -> void {
    if (!left.empty()) walk_right(walk_right, left.back() + 1);
    if (left.size() == bound_ + 1) return;
    for (std::size_t i = from; i < n; ++i) {
      left.push_back(i);
      self(self, i + 1);
      left.pop_back();
    }
  };
  walk_left(walk_left, 0);
}

std::optional<YWitness> YMembership::query(const Rational& v) const {
  auto it = index_->sums.find(v);
  if (it == index_->sums.end()) return std::nullopt;
  return it->second;
}

}  // namespace ralg
