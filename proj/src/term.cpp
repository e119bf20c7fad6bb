#include "ralg/term.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <random>

#include "ralg/error.hpp"

namespace ralg {

OrderlyTerm OrderlyTerm::leaf(SortIndex sort) {
  auto rep = std::make_shared<Rep>();
  rep->leaf = true;
  rep->output = sort;
  rep->inputs = {sort};
  return OrderlyTerm(std::move(rep));
}

OrderlyTerm OrderlyTerm::node(const Signature& sig, std::size_t op, std::vector<OrderlyTerm> children) {
  const OperationDef& def = sig.op(op);
  if (children.size() != def.arity())
    throw PreconditionError("operation " + def.name + " takes " + std::to_string(def.arity()) + " children, got " +
                            std::to_string(children.size()));
  auto rep = std::make_shared<Rep>();
  rep->leaf = false;
  rep->op = op;
  rep->output = def.output;
  rep->size = 1;
  for (std::size_t k = 0; k < children.size(); ++k) {
    if (children[k].output() != def.inputs[k])
      throw PreconditionError("operation " + def.name + ": child " + std::to_string(k) + " has the wrong output sort");
    rep->inputs.insert(rep->inputs.end(), children[k].inputs().begin(), children[k].inputs().end());
    rep->size += children[k].size();
  }
  rep->children = std::move(children);
  return OrderlyTerm(std::move(rep));
}

std::strong_ordering structural_compare(const OrderlyTerm& a, const OrderlyTerm& b) {
  if (a.rep_ == b.rep_) return std::strong_ordering::equal;
  if (a.is_leaf() != b.is_leaf()) return a.is_leaf() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.is_leaf()) return a.output() <=> b.output();
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  const auto& ca = a.children();
  const auto& cb = b.children();
  for (std::size_t k = 0; k < ca.size() && k < cb.size(); ++k)
    if (auto c = structural_compare(ca[k], cb[k]); c != 0) return c;
  return ca.size() <=> cb.size();
}

std::strong_ordering operator<=>(const OrderlyTerm& a, const OrderlyTerm& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  if (auto c = a.arity() <=> b.arity(); c != 0) return c;
  return structural_compare(a, b);
}

bool operator==(const OrderlyTerm& a, const OrderlyTerm& b) { return structural_compare(a, b) == 0; }

TermSignatureInfo term_info(const OrderlyTerm& t) { return {t.inputs(), t.output(), t.size()}; }

namespace {

// Terms of exactly a given size, per output sort.
using SizeTable = std::vector<std::vector<std::vector<OrderlyTerm>>>;

void build_nodes(const Signature& sig, const SizeTable& table, std::size_t op, std::size_t budget,
                 std::size_t max_arity, std::vector<OrderlyTerm>& out) {
  const OperationDef& def = sig.op(op);
  const std::size_t k = def.arity();
  if (k > max_arity) return;
  std::vector<OrderlyTerm> chosen;
  chosen.reserve(k);

  // Children are chosen left to right; `left` is the size still to distribute
  // and `arity` the leaves used so far.
  auto rec = [&](auto&& self, std::size_t j, std::size_t left, std::size_t arity) -> void {
    if (j == k) {
      if (left == 0) out.push_back(OrderlyTerm::node(sig, op, chosen));
      return;
    }
    const std::size_t remaining_children = k - j - 1;
    const auto& per_size = table[def.inputs[j].id];
    for (std::size_t s = 0; s <= left && s < per_size.size(); ++s) {
      for (const OrderlyTerm& c : per_size[s]) {
        if (arity + c.arity() + remaining_children > max_arity) continue;
        chosen.push_back(c);
        self(self, j + 1, left - s, arity + c.arity());
        chosen.pop_back();
      }
    }
  };
  rec(rec, 0, budget, 0);
}

SizeTable build_table(const Signature& sig, std::size_t max_arity, std::size_t max_size) {
  const std::size_t n = sig.num_phyla();
  SizeTable table(n);
  for (std::size_t s = 0; s < n; ++s) table[s].push_back({OrderlyTerm::leaf(SortIndex{static_cast<std::uint32_t>(s)})});
  for (std::size_t size = 1; size <= max_size; ++size) {
    for (std::size_t s = 0; s < n; ++s) table[s].emplace_back();
    for (std::size_t op = 0; op < sig.num_ops(); ++op) {
      std::vector<OrderlyTerm> fresh;
      build_nodes(sig, table, op, size - 1, max_arity, fresh);
      auto& slot = table[sig.op(op).output.id][size];
      slot.insert(slot.end(), fresh.begin(), fresh.end());
    }
  }
  return table;
}

std::vector<OrderlyTerm> flatten_sorted(std::vector<std::vector<OrderlyTerm>>& per_size) {
  std::vector<OrderlyTerm> out;
  for (auto& v : per_size) out.insert(out.end(), v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<OrderlyTerm> enumerate_terms(const Signature& sig, SortIndex output, std::size_t max_arity,
                                         std::size_t max_size) {
  if (max_arity < 1) throw PreconditionError("max arity must be at least 1");
  if (!sig.valid_sort(output)) throw PreconditionError("invalid output sort " + std::to_string(output.id));
  SizeTable table = build_table(sig, max_arity, max_size);
  return flatten_sorted(table[output.id]);
}

TermCatalog::TermCatalog(const Signature& sig, std::size_t max_arity, std::size_t max_size)
    : max_arity_(max_arity), max_size_(max_size) {
  if (max_arity < 1) throw PreconditionError("max arity must be at least 1");
  SizeTable table = build_table(sig, max_arity, max_size);
  for (auto& per_size : table) by_sort_.push_back(flatten_sorted(per_size));
}

namespace {

Value eval_at(const Signature& sig, const OrderlyTerm& t, std::span<const Value> args, std::size_t& pos) {
  if (t.is_leaf()) return args[pos++];
  std::vector<Value> sub;
  sub.reserve(t.children().size());
  for (const OrderlyTerm& c : t.children()) sub.push_back(eval_at(sig, c, args, pos));
  return sig.apply_unchecked(t.op(), sub);
}

}  // namespace

Value evaluate_unchecked(const Signature& sig, const OrderlyTerm& t, std::span<const Value> args) {
  std::size_t pos = 0;
  return eval_at(sig, t, args, pos);
}

Value evaluate(const Signature& sig, const OrderlyTerm& t, std::span<const Value> args) {
  if (args.size() != t.arity())
    throw PreconditionError("term of arity " + std::to_string(t.arity()) + " applied to " +
                            std::to_string(args.size()) + " arguments");
  for (std::size_t i = 0; i < args.size(); ++i)
    if (!sig.contains(t.inputs()[i], args[i]))
      throw PreconditionError("argument " + std::to_string(i) + " does not lie in phylum " +
                              sig.phylum(t.inputs()[i]).name);
  return evaluate_unchecked(sig, t, args);
}

namespace {

OrderlyTerm subst_at(const Signature& sig, const OrderlyTerm& t, const std::vector<OrderlyTerm>& repl,
                     std::size_t& pos) {
  if (t.is_leaf()) {
    const OrderlyTerm& r = repl[pos++];
    if (r.output() != t.output()) throw PreconditionError("substituted term has the wrong output sort");
    return r;
  }
  std::vector<OrderlyTerm> kids;
  kids.reserve(t.children().size());
  for (const OrderlyTerm& c : t.children()) kids.push_back(subst_at(sig, c, repl, pos));
  return OrderlyTerm::node(sig, t.op(), std::move(kids));
}

Value sample_value(const Signature& sig, SortIndex s, std::mt19937_64& rng) {
  if (auto card = sig.cardinality(s)) {
    std::uniform_int_distribution<std::size_t> d(0, *card - 1);
    return sig.element_at(s, d(rng));
  }
  std::uniform_int_distribution<int> num(-40, 40);
  std::uniform_int_distribution<int> den(1, 6);
  auto rational = [&] { return Rational(num(rng), den(rng)); };
  if (sig.is_field(s)) return Value::scalar(s, rational());
  Vector coords;
  for (std::uint32_t i = 0; i < sig.dim_of(s); ++i) coords.emplace_back(rational());
  return Value::vector(s, std::move(coords));
}

}  // namespace

OrderlyTerm substitute(const Signature& sig, const OrderlyTerm& t, const std::vector<OrderlyTerm>& replacements) {
  if (replacements.size() != t.arity()) throw PreconditionError("substitution needs one term per leaf");
  std::size_t pos = 0;
  return subst_at(sig, t, replacements, pos);
}

std::vector<OrderlyTerm> dedup_semantic(const Signature& sig, const std::vector<OrderlyTerm>& terms,
                                        std::size_t sample_limit, unsigned seed) {
  // Sample tuples are fixed per input-sort vector so that all terms sharing a
  // domain are compared on the same points.
  std::map<std::vector<SortIndex>, std::vector<std::vector<Value>>> samples;
  auto tuples_for = [&](const std::vector<SortIndex>& inputs) -> const std::vector<std::vector<Value>>& {
    auto it = samples.find(inputs);
    if (it != samples.end()) return it->second;
    std::vector<std::vector<Value>> tuples;
    std::optional<std::size_t> total = 1;
    for (SortIndex s : inputs) {
      auto c = sig.cardinality(s);
      if (!c || *total > sample_limit / std::max<std::size_t>(*c, 1) + 1) {
        total.reset();
        break;
      }
      *total *= *c;
    }
    if (total && *total <= sample_limit) {
      std::vector<std::size_t> idx(inputs.size(), 0);
      for (std::size_t n = 0; n < *total; ++n) {
        std::vector<Value> tup;
        for (std::size_t k = 0; k < inputs.size(); ++k) tup.push_back(sig.element_at(inputs[k], idx[k]));
        tuples.push_back(std::move(tup));
        for (std::size_t k = inputs.size(); k-- > 0;) {
          if (++idx[k] < *sig.cardinality(inputs[k])) break;
          idx[k] = 0;
        }
      }
    } else {
      std::mt19937_64 rng(seed);
      for (std::size_t n = 0; n < std::min<std::size_t>(sample_limit, 256); ++n) {
        std::vector<Value> tup;
        for (SortIndex s : inputs) tup.push_back(sample_value(sig, s, rng));
        tuples.push_back(std::move(tup));
      }
    }
    return samples.emplace(inputs, std::move(tuples)).first->second;
  };

  std::map<std::pair<std::vector<SortIndex>, std::vector<Value>>, bool> seen;
  std::vector<OrderlyTerm> out;
  for (const OrderlyTerm& t : terms) {
    std::vector<Value> image;
    for (const auto& tup : tuples_for(t.inputs())) image.push_back(evaluate_unchecked(sig, t, tup));
    if (seen.emplace(std::make_pair(t.inputs(), std::move(image)), true).second) out.push_back(t);
  }
  return out;
}

std::string to_string(const Signature& sig, const OrderlyTerm& t) {
  if (t.is_leaf()) return "(id" + sig.phylum(t.output()).name + " _)";
  std::string s = "(" + sig.op(t.op()).name;
  for (const OrderlyTerm& c : t.children()) s += " " + to_string(sig, c);
  return s + ")";
}

namespace {

class TermReader {
 public:
  TermReader(const Signature& sig, std::string_view text) : sig_(sig), text_(text) {}

  OrderlyTerm read_all() {
    OrderlyTerm t = read();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw PreconditionError("term parse error at offset " + std::to_string(pos_) + ": " + msg);
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  OrderlyTerm read() {
    expect('(');
    const std::size_t name_at = pos_;
    const std::string name = word();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '_' && name.rfind("id", 0) == 0) {
      auto s = sig_.find_phylum(name.substr(2));
      if (!s) {
        pos_ = name_at;
        fail("unknown phylum in leaf '" + name + "'");
      }
      ++pos_;
      expect(')');
      return OrderlyTerm::leaf(*s);
    }
    auto op = sig_.find_op(name);
    if (!op) {
      pos_ = name_at;
      fail("unknown operation '" + name + "'");
    }
    std::vector<OrderlyTerm> kids;
    while (true) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ')') break;
      kids.push_back(read());
    }
    ++pos_;
    return OrderlyTerm::node(sig_, *op, std::move(kids));
  }

  const Signature& sig_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

OrderlyTerm parse_term(const Signature& sig, std::string_view text) { return TermReader(sig, text).read_all(); }

}  // namespace ralg
