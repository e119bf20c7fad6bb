#include "ralg/dsl/elaborate.hpp"

#include <algorithm>
#include <mutex>
#include <random>
#include <set>

#include "ralg/dsl/parser.hpp"
#include "ralg/vspace.hpp"

namespace ralg::dsl {

namespace {

[[noreturn]] void fail(const SourceSpan& s, std::string msg) { throw ElaborationError(Diagnostic{s, std::move(msg)}); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string literal_kind(const Literal& l) {
  switch (l.node.index()) {
    case 0: return "integer";
    case 1: return "rational";
    case 2: return "atom";
    case 3: return "name";
    case 4: return "string";
    case 5: return "vector";
    default: return "list";
  }
}

std::optional<Rational> as_rational(const Literal& l) {
  if (const auto* i = std::get_if<IntLit>(&l.node)) return Rational(i->value);
  if (const auto* r = std::get_if<RatLit>(&l.node)) return Rational(r->num, r->den);
  return std::nullopt;
}

}  // namespace

const std::map<std::string, std::vector<std::string>>& experiment_kinds() {
  static const std::map<std::string, std::vector<std::string>> kinds{
      {"search",
       {"sort", "seq", "coloring", "target_len", "reduction_size", "reduction_arity", "fr_size", "fr_arity"}},
      {"hindman", {"op", "seq", "coloring", "target_len", "max_block_size", "fr_max_term_size"}},
      {"longproof",
       {"sort", "seq", "coloring", "target_len", "max_block_size", "fr_max_term_size", "fr_size", "trials"}},
      {"katetov", {"map", "size", "instances"}},
      {"beta", {"length", "term_bound", "linear_limit", "budget"}},
      {"field_counterexample", {"beta_length", "term_bound", "reduction_length", "reduction_size"}},
      {"vspace_counterexample",
       {"beta_length", "term_bound", "reduction_length", "reduction_size", "sort", "vector"}},
      {"k_counterexample", {"p", "basis", "reduction_length", "reduction_size"}},
      {"corteh", {"seq", "target_len", "max_term_size", "fr_max_term_size"}},
      {"classify_unary", {"phylum"}},
      {"classify_vspace", {"sort"}},
  };
  return kinds;
}

const KeyValue* ExperimentDef::find(std::string_view key) const {
  for (const KeyValue& kv : entries)
    if (kv.key.name == key) return &kv;
  return nullptr;
}

const ExperimentDef& Program::experiment(std::string_view name) const {
  auto it = experiments_.find(std::string(name));
  if (it == experiments_.end()) fail(SourceSpan{}, "no experiment named '" + std::string(name) + "'");
  return it->second;
}

bool Program::is_vspace_layout() const {
  const Signature& sig = *sig_;
  return sig.num_phyla() >= 2 && sig.is_field(kScalarSort) && sig.is_vector_space(kVectorSort) &&
         std::get<VectorSpace>(sig.phylum(kVectorSort).kind).field == kScalarSort;
}

Value Program::interpret(const Literal& lit, SortIndex s) const {
  const Signature& sig = *sig_;
  const Phylum& ph = sig.phylum(s);
  if (const auto* fe = std::get_if<FiniteEnumerated>(&ph.kind)) {
    std::string name;
    if (const auto* a = std::get_if<AtomLit>(&lit.node)) name = a->name;
    else if (const auto* i = std::get_if<IntLit>(&lit.node)) name = i->value.str();
    else fail(lit.loc.span, "expected an atom of " + ph.name + ", found a " + literal_kind(lit));
    auto it = std::find(fe->atoms.begin(), fe->atoms.end(), name);
    if (it == fe->atoms.end()) fail(lit.loc.span, "'" + name + " is not an atom of " + ph.name);
    return Value::atom(s, static_cast<std::uint32_t>(it - fe->atoms.begin()));
  }
  if (sig.is_field(s)) {
    auto q = as_rational(lit);
    if (!q) fail(lit.loc.span, "expected an element of " + ph.name + ", found a " + literal_kind(lit));
    try {
      return Value::scalar(s, sig.field_of(s).from_rational(*q));
    } catch (const Error& e) {
      fail(lit.loc.span, e.what());
    }
  }
  const auto* vec = std::get_if<std::shared_ptr<VecLit>>(&lit.node);
  if (vec == nullptr) fail(lit.loc.span, "expected a vector of " + ph.name + ", found a " + literal_kind(lit));
  const std::uint32_t dim = sig.dim_of(s);
  if ((*vec)->coords.size() != dim)
    fail(lit.loc.span, "vector has " + std::to_string((*vec)->coords.size()) + " coordinates but " + ph.name +
                           " has dimension " + std::to_string(dim));
  const SortIndex fs = std::get<VectorSpace>(ph.kind).field;
  Vector coords;
  for (const Literal& c : (*vec)->coords) coords.push_back(interpret(c, fs).as_scalar());
  return Value::vector(s, std::move(coords));
}

const KeyValue& Program::require(const ExperimentDef& x, std::string_view key) const {
  const KeyValue* kv = x.find(key);
  if (kv == nullptr) fail(x.span, "experiment " + x.name + " needs a '" + std::string(key) + "' entry");
  return *kv;
}

std::size_t Program::get_size(const ExperimentDef& x, std::string_view key, std::optional<std::size_t> fallback,
                              std::size_t min) const {
  const KeyValue* kv = x.find(key);
  if (kv == nullptr) {
    if (fallback) return *fallback;
    require(x, key);
  }
  const auto* i = std::get_if<IntLit>(&kv->value.node);
  if (i == nullptr || i->value < 0 || i->value > BigInt(1) << 40)
    fail(kv->value.loc.span, "'" + std::string(key) + "' must be a nonnegative integer");
  const auto v = static_cast<std::size_t>(i->value);
  if (v < min) fail(kv->value.loc.span, "'" + std::string(key) + "' must be at least " + std::to_string(min));
  return v;
}

std::uint64_t Program::get_u64(const ExperimentDef& x, std::string_view key,
                               std::optional<std::uint64_t> fallback) const {
  const KeyValue* kv = x.find(key);
  if (kv == nullptr) {
    if (fallback) return *fallback;
    require(x, key);
  }
  const auto* i = std::get_if<IntLit>(&kv->value.node);
  if (i == nullptr || i->value < 0 || i->value > BigInt(std::numeric_limits<std::uint64_t>::max()))
    fail(kv->value.loc.span, "'" + std::string(key) + "' must be a nonnegative 64-bit integer");
  return static_cast<std::uint64_t>(i->value);
}

std::string Program::get_name(const ExperimentDef& x, std::string_view key) const {
  const KeyValue& kv = require(x, key);
  const auto* n = std::get_if<NameLit>(&kv.value.node);
  if (n == nullptr) fail(kv.value.loc.span, "'" + std::string(key) + "' must be a name");
  return n->name;
}

SortWord Program::get_sort(const ExperimentDef& x, std::string_view key) const {
  const KeyValue& kv = require(x, key);
  const auto* n = std::get_if<NameLit>(&kv.value.node);
  if (n == nullptr) fail(kv.value.loc.span, "'" + std::string(key) + "' must name a sort");
  auto it = sorts_.find(n->name);
  if (it == sorts_.end()) fail(kv.value.loc.span, "unknown sort '" + n->name + "'");
  return it->second;
}

SortIndex Program::get_phylum(const ExperimentDef& x, std::string_view key) const {
  const KeyValue& kv = require(x, key);
  if (const auto* n = std::get_if<NameLit>(&kv.value.node)) {
    auto s = sig_->find_phylum(n->name);
    if (!s) fail(kv.value.loc.span, "unknown phylum '" + n->name + "'");
    return *s;
  }
  if (const auto* i = std::get_if<IntLit>(&kv.value.node)) {
    if (i->value < 0 || i->value >= sig_->num_phyla()) fail(kv.value.loc.span, "phylum index out of range");
    return SortIndex{static_cast<std::uint32_t>(i->value)};
  }
  fail(kv.value.loc.span, "'" + std::string(key) + "' must name a phylum");
}

std::size_t Program::get_op(const ExperimentDef& x, std::string_view key) const {
  const KeyValue& kv = require(x, key);
  const auto* n = std::get_if<NameLit>(&kv.value.node);
  if (n == nullptr) fail(kv.value.loc.span, "'" + std::string(key) + "' must name an operation");
  auto op = sig_->find_op(n->name);
  if (!op) fail(kv.value.loc.span, "unknown operation '" + n->name + "'");
  return *op;
}

std::vector<BigInt> Program::get_int_list(const ExperimentDef& x, std::string_view key) const {
  const KeyValue& kv = require(x, key);
  const auto* l = std::get_if<std::shared_ptr<ListLit>>(&kv.value.node);
  if (l == nullptr) fail(kv.value.loc.span, "'" + std::string(key) + "' must be a list of integers");
  std::vector<BigInt> out;
  for (const Literal& item : (*l)->items) {
    const auto* i = std::get_if<IntLit>(&item.node);
    if (i == nullptr) fail(item.loc.span, "expected an integer, found a " + literal_kind(item));
    out.push_back(i->value);
  }
  return out;
}

std::vector<std::size_t> Program::get_size_list(const ExperimentDef& x, std::string_view key) const {
  const KeyValue& kv = require(x, key);
  const std::vector<BigInt> raw = get_int_list(x, key);
  std::vector<std::size_t> out;
  for (const BigInt& v : raw) {
    if (v < 0 || v > BigInt(1) << 40) fail(kv.value.loc.span, "'" + std::string(key) + "' entries must be nonnegative");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

Vector Program::get_vector(const ExperimentDef& x, std::string_view key, const Field& f) const {
  const KeyValue& kv = require(x, key);
  const auto* v = std::get_if<std::shared_ptr<VecLit>>(&kv.value.node);
  if (v == nullptr) fail(kv.value.loc.span, "'" + std::string(key) + "' must be a vector <...>");
  Vector out;
  for (const Literal& c : (*v)->coords) {
    auto q = as_rational(c);
    if (!q) fail(c.loc.span, "vector coordinates must be numbers");
    try {
      out.push_back(f.from_rational(*q));
    } catch (const Error& e) {
      fail(c.loc.span, e.what());
    }
  }
  return out;
}

SortedPrefix Program::get_prefix(const ExperimentDef& x, std::string_view key, const SortWord& e) const {
  const KeyValue& kv = require(x, key);
  const auto* n = std::get_if<NameLit>(&kv.value.node);
  if (n == nullptr) fail(kv.value.loc.span, "'" + std::string(key) + "' must name a sequence");
  auto it = seqs_.find(n->name);
  if (it == seqs_.end()) fail(kv.value.loc.span, "unknown sequence '" + n->name + "'");
  SortedPrefix out{{}, e};
  for (std::size_t i = 0; i < it->second.values.size(); ++i) {
    const Literal& lit = it->second.values[i];
    const SortIndex s = e.at(i);
    try {
      out.values.push_back(interpret(lit, s));
    } catch (const ElaborationError& err) {
      fail(lit.loc.span, "sequence " + n->name + " position " + std::to_string(i) + " must lie in " +
                             sig_->phylum(s).name + ": " + err.diagnostic().message);
    }
  }
  return out;
}

SortIndex Program::coloring_phylum(const ExperimentDef& x, std::string_view key) const {
  const KeyValue& kv = require(x, key);
  const auto* n = std::get_if<NameLit>(&kv.value.node);
  if (n == nullptr) fail(kv.value.loc.span, "'" + std::string(key) + "' must name a coloring");
  auto it = colorings_.find(n->name);
  if (it == colorings_.end()) fail(kv.value.loc.span, "unknown coloring '" + n->name + "'");
  return it->second.phylum;
}

bool Program::coloring_is_random(const ExperimentDef& x, std::string_view key) const {
  coloring_phylum(x, key);
  const auto& c = colorings_.at(std::get<NameLit>(x.find(key)->value.node).name);
  return std::holds_alternative<RandomColoring>(c.decl.spec);
}

std::uint64_t Program::coloring_seed(const ExperimentDef& x, std::string_view key) const {
  coloring_phylum(x, key);
  const auto& c = colorings_.at(std::get<NameLit>(x.find(key)->value.node).name);
  if (const auto* r = std::get_if<RandomColoring>(&c.decl.spec)) return r->seed.value_or(default_seed_);
  return default_seed_;
}

Coloring Program::get_coloring(const ExperimentDef& x, std::string_view key,
                               std::optional<std::uint64_t> seed_override) const {
  coloring_phylum(x, key);
  const std::string& name = std::get<NameLit>(x.find(key)->value.node).name;
  return build_coloring(name, colorings_.at(name), seed_override);
}

Coloring Program::build_coloring(const std::string& name, const ColoringDef& c,
                                 std::optional<std::uint64_t> seed_override) const {
  const Signature& sig = *sig_;
  const SourceSpan& span = c.decl.loc.span;
  if (const auto* t = std::get_if<TableColoring>(&c.decl.spec)) {
    const auto card = sig.cardinality(c.phylum);
    if (!card) fail(span, "a table coloring needs a finite phylum");
    if (t->colors.size() != *card)
      fail(span, "table coloring " + name + " lists " + std::to_string(t->colors.size()) + " colors for " +
                     std::to_string(*card) + " elements");
    std::vector<std::size_t> colors(t->colors.begin(), t->colors.end());
    const std::size_t num = std::max<std::size_t>(2, *std::max_element(colors.begin(), colors.end()) + 1);
    Coloring out = table_coloring(sig, c.phylum, std::move(colors), num);
    out.description = "table " + name;
    return out;
  }
  if (const auto* p = std::get_if<PredicateColoring>(&c.decl.spec)) {
    return membership_coloring(c.phylum, build_predicate(p->pred, c.phylum),
                               "predicate " + name + ": " + print_predicate(p->pred));
  }
  if (const auto* r = std::get_if<RandomColoring>(&c.decl.spec)) {
    if (r->colors < 1) fail(span, "a random coloring needs at least one color");
    const std::uint64_t seed = seed_override.value_or(r->seed.value_or(default_seed_));
    const std::size_t num = r->colors;
    Coloring out;
    out.phylum = c.phylum;
    out.num_colors = num;
    out.description = "random " + name + " seed " + std::to_string(seed);
    if (const auto card = sig.cardinality(c.phylum)) {
      std::mt19937_64 rng(seed);
      std::vector<std::size_t> colors(*card);
      for (std::size_t& col : colors) col = static_cast<std::size_t>(rng() % num);
      Coloring t = table_coloring(sig, c.phylum, std::move(colors), num);
      t.description = out.description;
      return t;
    }
    auto sigp = sig_;
    out.classify = [sigp, seed, num](const Value& v) {
      const std::uint64_t h = std::hash<std::string>{}(sigp->format(v));
      return static_cast<std::size_t>(splitmix64(h ^ splitmix64(seed)) % num);
    };
    return out;
  }
  Coloring out;
  out.phylum = c.phylum;
  out.num_colors = 1;
  out.description = "const " + name;
  out.classify = [](const Value&) { return std::size_t{0}; };
  return out;
}

std::function<bool(const Value&)> Program::build_predicate(const Predicate& p, SortIndex s) const {
  const Signature& sig = *sig_;
  auto sigp = sig_;
  const SourceSpan& span = p.loc.span;
  switch (p.kind) {
    case PredKind::True: return [](const Value&) { return true; };
    case PredKind::Zero: {
      if (!sig.is_field(s) && !sig.is_vector_space(s)) fail(span, "'zero' needs a field or vector phylum");
      const Value z = sig.is_field(s) ? Value::scalar(s, sig.field_of(s).zero()) : sig.zero_vector(s);
      return [z](const Value& v) { return v == z; };
    }
    case PredKind::In: {
      auto members = std::make_shared<std::set<Value>>();
      for (const Literal& l : p.args) members->insert(interpret(l, s));
      return [members](const Value& v) { return members->contains(v); };
    }
    case PredKind::Mod: {
      const BigInt k = std::get<IntLit>(p.args[0].node).value;
      const BigInt r = std::get<IntLit>(p.args[1].node).value;
      if (k <= 0) fail(p.args[0].loc.span, "modulus must be positive");
      if (sig.is_vector_space(s)) fail(span, "'mod' needs an atom or field phylum");
      auto reduce = [k](const BigInt& n) { return ((n % k) + k) % k; };
      const BigInt target = reduce(r);
      return [k, target, reduce](const Value& v) {
        if (v.is_atom()) return reduce(BigInt(v.as_atom().ordinal)) == target;
        const Scalar& sc = v.as_scalar();
        if (const auto* res = std::get_if<Residue>(&sc)) return reduce(BigInt(res->value)) == target;
        const Rational& q = std::get<Rational>(sc);
        if (denominator(q) != 1) return false;
        return reduce(numerator(q)) == target;
      };
    }
    case PredKind::InY:
    case PredKind::InX: {
      const auto& seq_name = std::get<NameLit>(p.args[0].node).name;
      auto it = seqs_.find(seq_name);
      if (it == seqs_.end()) fail(p.args[0].loc.span, "unknown sequence '" + seq_name + "'");
      const BigInt bound_raw = std::get<IntLit>(p.args[1].node).value;
      if (bound_raw < 1 || bound_raw > 16) fail(p.args[1].loc.span, "term bound must lie in 1..16");
      const auto bound = static_cast<std::size_t>(bound_raw);
      BetaSequence beta;
      beta.term_bound = bound;
      for (const Literal& l : it->second.values) {
        const auto* i = std::get_if<IntLit>(&l.node);
        if (i == nullptr || *i == IntLit{0}) fail(l.loc.span, "beta values must be nonzero integers");
        beta.values.push_back(i->value);
      }
      struct Lazy {
        BetaSequence beta;
        std::size_t bound;
        std::once_flag once;
        std::optional<YMembership> y;
        const YMembership& get() {
          std::call_once(once, [&] { y.emplace(beta, bound); });
          return *y;
        }
      };
      auto lazy = std::make_shared<Lazy>();
      lazy->beta = std::move(beta);
      lazy->bound = bound;
      if (p.kind == PredKind::InY) {
        if (!sig.is_field(s) || sig.field_of(s).is_finite()) fail(span, "'in_Y' needs the rational field phylum");
        return [lazy](const Value& v) { return lazy->get().contains(std::get<Rational>(v.as_scalar())); };
      }
      if (!sig.is_vector_space(s) || sig.field_of(s).is_finite())
        fail(span, "'in_X' needs a vector phylum over the rationals");
      const Value base = interpret(p.args[2], s);
      if (base == sig.zero_vector(s)) fail(p.args[2].loc.span, "the direction vector must be nonzero");
      return [lazy, base](const Value& v) {
        return x_membership(lazy->get(), base.as_vector(), v.as_vector()).has_value();
      };
    }
    case PredKind::LeadingCoeffOne: {
      if (!sig.is_vector_space(s)) fail(span, "'leading_coeff_one' needs a vector phylum");
      const Field f = sig.field_of(s);
      return [f](const Value& v) { return leading_coeff_one(f, v.as_vector()); };
    }
    case PredKind::Not: {
      auto inner = build_predicate(p.children[0], s);
      return [inner](const Value& v) { return !inner(v); };
    }
    case PredKind::And:
    case PredKind::Or: {
      std::vector<std::function<bool(const Value&)>> parts;
      for (const Predicate& c : p.children) parts.push_back(build_predicate(c, s));
      const bool conj = p.kind == PredKind::And;
      return [parts, conj](const Value& v) {
        for (const auto& f : parts)
          if (f(v) != conj) return !conj;
        return conj;
      };
    }
  }
  fail(span, "unsupported predicate");
}

struct Elaborator {
  const FileAst& ast;
  const ElaborateOptions& options;
  std::vector<Diagnostic> diags;
  Program prog;
  std::map<std::string, SourceSpan> phylum_spans;
  std::map<std::string, SourceSpan> op_spans;

  template <class F>
  void guarded(F&& f) {
    try {
      f();
    } catch (const ElaborationError& e) {
      diags.push_back(e.diagnostic());
    }
  }

  SortIndex resolve(const SortRef& r, const std::vector<Phylum>& phyla) {
    if (const auto* n = std::get_if<std::string>(&r.ref)) {
      for (std::size_t i = 0; i < phyla.size(); ++i)
        if (phyla[i].name == *n) return SortIndex{static_cast<std::uint32_t>(i)};
      fail(r.loc.span, "unknown phylum '" + *n + "'");
    }
    const std::uint32_t i = std::get<std::uint32_t>(r.ref);
    if (i >= phyla.size())
      fail(r.loc.span, "phylum index " + std::to_string(i) + " out of range (" + std::to_string(phyla.size()) +
                           " phyla declared)");
    return SortIndex{i};
  }

  void run() {
    prog.default_seed_ = options.default_seed;
    std::vector<Phylum> phyla;
    std::vector<const PhylumDecl*> phylum_decls;
    for (const Decl& d : ast.decls)
      if (const auto* p = std::get_if<PhylumDecl>(&d)) {
        if (phylum_spans.contains(p->name.name)) {
          diags.push_back({p->name.loc.span, "duplicate phylum name '" + p->name.name + "'"});
          continue;
        }
        phylum_spans[p->name.name] = p->loc.span;
        phyla.push_back(Phylum{p->name.name, FiniteEnumerated{}});
        phylum_decls.push_back(p);
      }
    for (std::size_t i = 0; i < phyla.size(); ++i)
      guarded([&] { phyla[i].kind = carrier(*phylum_decls[i], phyla); });

    // Field kinds must be known before builtin factors can be interpreted.
    prog.sig_ = std::make_shared<Signature>(phyla, std::vector<OperationDef>{});
    std::vector<OperationDef> ops;
    for (const Decl& d : ast.decls)
      if (const auto* o = std::get_if<OpDecl>(&d)) guarded([&] { add_op(*o, phyla, ops); });
    auto sig = std::make_shared<Signature>(std::move(phyla), std::move(ops));
    prog.sig_ = sig;
    if (diags.empty())
      for (const std::string& msg : validate_signature(*sig)) diags.push_back({span_for(msg), msg});
    if (!diags.empty()) return;

    for (const Decl& d : ast.decls) {
      if (const auto* s = std::get_if<SortDecl>(&d)) guarded([&] { add_sort(*s); });
      if (const auto* s = std::get_if<SeqDecl>(&d)) guarded([&] { add_seq(*s); });
    }
    for (const Decl& d : ast.decls)
      if (const auto* c = std::get_if<ColoringDecl>(&d)) guarded([&] { add_coloring(*c); });
    for (const Decl& d : ast.decls)
      if (const auto* x = std::get_if<ExperimentDecl>(&d)) guarded([&] { add_experiment(*x); });
  }

  SourceSpan span_for(const std::string& msg) {
    for (const auto& [name, span] : op_spans)
      if (msg.rfind("operation " + name + ":", 0) == 0) return span;
    for (const auto& [name, span] : phylum_spans)
      if (msg.find("phylum " + name) != std::string::npos || msg.find("'" + name + "'") != std::string::npos) return span;
    return ast.decls.empty() ? SourceSpan{} : std::visit([](const auto& d) { return d.loc.span; }, ast.decls.front());
  }

  PhylumKind carrier(const PhylumDecl& p, const std::vector<Phylum>& phyla) {
    return std::visit(
        [&](const auto& c) -> PhylumKind {
          using C = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<C, AtomsCarrier>) {
            if (c.atoms.empty()) fail(p.loc.span, "phylum " + p.name.name + " has no atoms");
            return FiniteEnumerated{c.atoms};
          } else if constexpr (std::is_same_v<C, GfCarrier>) {
            if (!is_prime(c.p)) fail(p.loc.span, "gf(" + std::to_string(c.p) + "): the field size must be prime");
            return PrimeField{c.p};
          } else if constexpr (std::is_same_v<C, RationalsCarrier>) {
            return RationalField{};
          } else {
            const SortIndex f = resolve(SortRef{c.field.name, c.field.loc}, phyla);
            if (!std::holds_alternative<PrimeField>(phyla[f.id].kind) &&
                !std::holds_alternative<RationalField>(phyla[f.id].kind))
              fail(c.field.loc.span, "'" + c.field.name + "' is not a field phylum declared before " + p.name.name);
            if (c.dim < 1) fail(p.loc.span, "dimension must be at least 1");
            return VectorSpace{f, c.dim};
          }
        },
        p.carrier);
  }

  void add_op(const OpDecl& o, const std::vector<Phylum>& phyla, std::vector<OperationDef>& ops) {
    if (op_spans.contains(o.name.name)) fail(o.name.loc.span, "duplicate operation name '" + o.name.name + "'");
    op_spans[o.name.name] = o.loc.span;
    OperationDef def;
    def.name = o.name.name;
    for (const SortRef& r : o.inputs) def.inputs.push_back(resolve(r, phyla));
    def.output = resolve(o.output, phyla);
    const Signature& sig = *prog.sig_;
    if (const auto* b = std::get_if<BuiltinOpBody>(&o.body)) {
      const auto& in = def.inputs;
      const SortIndex out = def.output;
      const bool vec_out = sig.is_vector_space(out);
      std::string kind = b->kind;
      if (kind.empty()) {
        if (vec_out && in.size() == 2 && in[0] == out && in[1] == out) kind = "add";
        else if (vec_out && in.size() == 2 && in[1] == out) kind = "smul";
        else if (sig.is_field(out) && in.size() == 2)
          fail(o.loc.span, "builtin on a field is ambiguous; write 'builtin add' or 'builtin mul'");
        else fail(o.loc.span, "cannot infer a builtin for operation " + o.name.name + " from its sorts");
      }
      auto mismatch = [&] { fail(o.loc.span, "builtin " + kind + " does not match the sorts of " + o.name.name); };
      if (kind == "add") {
        def.body = BuiltinBody{vec_out ? Builtin::VectorAdd : Builtin::FieldAdd, Residue{0}};
      } else if (kind == "mul") {
        def.body = BuiltinBody{Builtin::FieldMul, Residue{0}};
      } else if (kind == "smul") {
        def.body = BuiltinBody{Builtin::ScalarMul, Residue{0}};
      } else if (kind == "scale") {
        if (!vec_out || in.size() != 1) mismatch();
        const SortIndex fs = std::get<VectorSpace>(sig.phylum(out).kind).field;
        def.body = BuiltinBody{Builtin::Scale, prog.interpret(*b->arg, fs).as_scalar()};
      } else {
        if (!vec_out || in.size() != 1 || in[0] != out) mismatch();
        const Field f = sig.field_of(out);
        if (!f.is_finite()) fail(o.loc.span, "builtin ksig needs a vector space over a prime field");
        for (std::uint32_t r = 1; r < f.characteristic(); ++r)
          ops.push_back({def.name + std::to_string(r), in, out, BuiltinBody{Builtin::Scale, Residue{r}}});
        return;
      }
      // Builtin sort agreement is checked by validate_signature once all ops are known.
    } else if (const auto* t = std::get_if<TableOpBody>(&o.body)) {
      TableBody body;
      for (const Literal& l : t->entries) body.outputs.push_back(prog.interpret(l, def.output));
      std::size_t expected = 1;
      for (SortIndex s : def.inputs) {
        const auto c = sig.cardinality(s);
        if (!c) fail(o.loc.span, "table operation " + o.name.name + " has the infinite input phylum " + sig.phylum(s).name);
        expected *= *c;
      }
      if (body.outputs.size() != expected)
        fail(o.loc.span, "table of " + o.name.name + " has " + std::to_string(body.outputs.size()) + " entries, expected " +
                             std::to_string(expected));
      def.body = std::move(body);
    } else {
      def.body = ConstantBody{prog.interpret(std::get<ConstOpBody>(o.body).value, def.output)};
    }
    ops.push_back(std::move(def));
  }

  void add_sort(const SortDecl& s) {
    if (prog.sorts_.contains(s.name.name)) fail(s.name.loc.span, "duplicate sort name '" + s.name.name + "'");
    std::vector<SortIndex> prefix;
    std::vector<SortIndex> period;
    for (const SortRef& r : s.prefix) prefix.push_back(resolve(r, prog.sig_->phyla()));
    for (const SortRef& r : s.period) period.push_back(resolve(r, prog.sig_->phyla()));
    prog.sorts_.emplace(s.name.name, SortWord(std::move(prefix), std::move(period)));
  }

  void add_seq(const SeqDecl& s) {
    if (prog.seqs_.contains(s.name.name)) fail(s.name.loc.span, "duplicate sequence name '" + s.name.name + "'");
    prog.seqs_.emplace(s.name.name, Program::SeqDef{s.values, s.loc.span});
  }

  void add_coloring(const ColoringDecl& c) {
    if (prog.colorings_.contains(c.name.name)) fail(c.name.loc.span, "duplicate coloring name '" + c.name.name + "'");
    Program::ColoringDef def{resolve(c.phylum, prog.sig_->phyla()), c};
    // Builds once so that every semantic error surfaces here.
    prog.build_coloring(c.name.name, def, std::nullopt);
    prog.colorings_.emplace(c.name.name, std::move(def));
  }

  void add_experiment(const ExperimentDecl& x) {
    if (prog.experiments_.contains(x.name.name))
      fail(x.name.loc.span, "duplicate experiment name '" + x.name.name + "'");
    ExperimentDef def;
    def.name = x.name.name;
    def.entries = x.entries;
    def.span = x.loc.span;
    std::set<std::string> seen;
    for (const KeyValue& kv : x.entries)
      if (!seen.insert(kv.key.name).second) fail(kv.key.loc.span, "duplicate key '" + kv.key.name + "'");
    def.kind = prog.get_name(def, "kind");
    const auto& kinds = experiment_kinds();
    auto it = kinds.find(def.kind);
    if (it == kinds.end()) fail(def.find("kind")->value.loc.span, "unknown experiment kind '" + def.kind + "'");
    for (const KeyValue& kv : x.entries)
      if (kv.key.name != "kind" && std::find(it->second.begin(), it->second.end(), kv.key.name) == it->second.end())
        fail(kv.key.loc.span, "experiment kind " + def.kind + " does not take '" + kv.key.name + "'");
    check(def);
    prog.experiments_.emplace(def.name, std::move(def));
  }

  void require_vspace(const ExperimentDef& x) {
    if (!prog.is_vspace_layout())
      fail(x.span, "experiment " + x.name + " needs phylum 0 to be a field and phylum 1 a vector space over it");
  }

  void same_phylum(const ExperimentDef& x, SortIndex expected, const char* what) {
    const SortIndex got = prog.coloring_phylum(x, "coloring");
    if (got != expected)
      fail(x.find("coloring")->value.loc.span, "coloring is over phylum " + prog.signature().phylum(got).name + " but " +
                                                   what + " is " + prog.signature().phylum(expected).name);
  }

  void check(const ExperimentDef& x) {
    const Program& p = prog;
    const Signature& sig = p.signature();
    const std::string& k = x.kind;
    if (k == "search") {
      const SortWord e = p.get_sort(x, "sort");
      same_phylum(x, e.at(0), "e(0)");
      p.get_prefix(x, "seq", e);
      p.get_size(x, "target_len", 1, 1);
      p.get_size(x, "reduction_size", 1, 1);
      p.get_size(x, "reduction_arity", 0);
      p.get_size(x, "fr_size", 2, 1);
      p.get_size(x, "fr_arity", 0);
    } else if (k == "hindman") {
      const std::size_t op = p.get_op(x, "op");
      const OperationDef& o = sig.op(op);
      if (o.arity() != 2 || o.inputs[0] != o.output || o.inputs[1] != o.output)
        fail(x.find("op")->value.loc.span, "operation " + o.name + " is not a binary operation on one phylum");
      same_phylum(x, o.output, "the operation's phylum");
      p.get_prefix(x, "seq", SortWord::constant(o.output));
      p.get_size(x, "target_len", 1, 1);
      p.get_size(x, "max_block_size", 1, 1);
      p.get_size(x, "fr_max_term_size", 2, 1);
    } else if (k == "longproof") {
      require_vspace(x);
      const SortWord e = p.get_sort(x, "sort");
      same_phylum(x, e.at(0), "e(0)");
      p.get_prefix(x, "seq", e);
      p.get_size(x, "target_len", 3, 1);
      p.get_size(x, "max_block_size", 1, 1);
      p.get_size(x, "fr_max_term_size", 2, 1);
      p.get_size(x, "fr_size", 2, 1);
      p.get_size(x, "trials", 1, 1);
    } else if (k == "katetov") {
      if (p.has(x, "map") == p.has(x, "size")) fail(x.span, "katetov needs exactly one of 'map' and 'size'");
      if (p.has(x, "map")) {
        const auto map = p.get_size_list(x, "map");
        for (std::size_t v : map)
          if (v >= map.size()) fail(x.find("map")->value.loc.span, "map value " + std::to_string(v) + " out of range");
        if (p.has(x, "instances")) fail(x.find("instances")->key.loc.span, "'instances' only applies with 'size'");
      } else {
        p.get_size(x, "size", std::nullopt, 2);
        p.get_size(x, "instances", 1, 1);
      }
    } else if (k == "beta") {
      p.get_size(x, "length", std::nullopt, 1);
      p.get_size(x, "term_bound", std::nullopt, 1);
      p.get_size(x, "linear_limit", 4096, 2);
      p.get_size(x, "budget", 200000, 1);
    } else if (k == "field_counterexample" || k == "vspace_counterexample") {
      p.get_size(x, "beta_length", 6, 1);
      p.get_size(x, "term_bound", 3, 1);
      p.get_size(x, "reduction_length", 2, 1);
      p.get_size(x, "reduction_size", 2, 1);
      if (k == "vspace_counterexample") {
        const SortWord e = p.get_sort(x, "sort");
        for (SortIndex s : e.period())
          if (s.id > 1) fail(x.find("sort")->value.loc.span, "the sort may only use phyla 0 and 1");
        for (SortIndex s : e.prefix())
          if (s.id > 1) fail(x.find("sort")->value.loc.span, "the sort may only use phyla 0 and 1");
        p.get_vector(x, "vector", Field::rationals());
      }
    } else if (k == "k_counterexample") {
      const std::size_t pr = p.get_size(x, "p", std::nullopt, 2);
      if (!is_prime(pr)) fail(x.find("p")->value.loc.span, "p must be prime");
      p.get_size(x, "basis", std::nullopt, 1);
      p.get_size(x, "reduction_length", 2, 1);
      p.get_size(x, "reduction_size", 3, 1);
    } else if (k == "corteh") {
      if (sig.num_phyla() < 2 || !sig.is_vector_space(kVectorSort))
        fail(x.span, "corteh needs phylum 1 to be a vector space");
      p.get_prefix(x, "seq", SortWord::constant(kVectorSort));
      p.get_size(x, "target_len", 1, 1);
      p.get_size(x, "max_term_size", 2, 1);
      p.get_size(x, "fr_max_term_size", 2, 1);
    } else if (k == "classify_unary") {
      const SortIndex s = p.get_phylum(x, "phylum");
      if (!sig.cardinality(s)) fail(x.find("phylum")->value.loc.span, "classify_unary needs a finite phylum");
    } else if (k == "classify_vspace") {
      require_vspace(x);
      const SortWord e = p.get_sort(x, "sort");
      for (SortIndex s : e.period())
        if (s.id > 1) fail(x.find("sort")->value.loc.span, "the sort may only use phyla 0 and 1");
    }
  }
};

ElaborateResult elaborate(const FileAst& ast, const ElaborateOptions& options) {
  Elaborator el{ast, options, {}, {}, {}, {}};
  el.run();
  ElaborateResult out;
  out.diagnostics = std::move(el.diags);
  if (out.diagnostics.empty()) out.program = std::move(el.prog);
  return out;
}

}  // namespace ralg::dsl
