#include "ralg/vspace.hpp"

#include <algorithm>
#include <map>

#include "ralg/error.hpp"
#include "ralg/linalg.hpp"

namespace ralg {

namespace {

PhylumKind field_kind(const Field& f) {
  if (f.is_finite()) return PrimeField{f.characteristic()};
  return RationalField{};
}

std::string values_text(const Signature& sig, const std::vector<Value>& vs) {
  std::string s = "[";
  for (std::size_t i = 0; i < vs.size(); ++i) s += (i > 0 ? " " : "") + sig.format(vs[i]);
  return s + "]";
}

}  // namespace

Signature make_vspace_signature(const Field& f, std::uint32_t dim) {
  std::vector<Phylum> phyla{{"F", field_kind(f)}, {"V", VectorSpace{kScalarSort, dim}}};
  std::vector<OperationDef> ops{
      {"+V", {kVectorSort, kVectorSort}, kVectorSort, BuiltinBody{Builtin::VectorAdd, f.zero()}},
      {"+F", {kScalarSort, kScalarSort}, kScalarSort, BuiltinBody{Builtin::FieldAdd, f.zero()}},
      {"*F", {kScalarSort, kScalarSort}, kScalarSort, BuiltinBody{Builtin::FieldMul, f.zero()}},
      {".", {kScalarSort, kVectorSort}, kVectorSort, BuiltinBody{Builtin::ScalarMul, f.zero()}},
  };
  return Signature(std::move(phyla), std::move(ops));
}

Signature make_field_signature(const Field& f) {
  std::vector<Phylum> phyla{{"F", field_kind(f)}};
  std::vector<OperationDef> ops{
      {"+F", {kScalarSort, kScalarSort}, kScalarSort, BuiltinBody{Builtin::FieldAdd, f.zero()}},
      {"*F", {kScalarSort, kScalarSort}, kScalarSort, BuiltinBody{Builtin::FieldMul, f.zero()}},
  };
  return Signature(std::move(phyla), std::move(ops));
}

Signature make_k_signature(const Field& f, std::uint32_t dim) {
  if (!f.is_finite()) throw PreconditionError("the K-structure is only materialized over prime fields");
  std::vector<Phylum> phyla{{"F", field_kind(f)}, {"V", VectorSpace{kScalarSort, dim}}};
  std::vector<OperationDef> ops{
      {"+V", {kVectorSort, kVectorSort}, kVectorSort, BuiltinBody{Builtin::VectorAdd, f.zero()}}};
  for (std::uint32_t r = 1; r < f.characteristic(); ++r)
    ops.push_back({"f" + std::to_string(r), {kVectorSort}, kVectorSort, BuiltinBody{Builtin::Scale, Residue{r}}});
  return Signature(std::move(phyla), std::move(ops));
}

std::string to_string(Verdict v) { return v == Verdict::Ramsey ? "Ramsey" : "NotRamsey"; }

Classification classify_vspace(const Field& f, std::uint32_t dim, const SortWord& e) {
  if (dim < 1) throw PreconditionError("dimension must be at least 1");
  const OmegaClass oc = omega_class(e, 2);
  if (!in_omega(oc))
    return {Verdict::Ramsey, "sort_rigidity",
            "the sort is eventually constant but not in Omega, so every reduction fixes its first positions"};
  const auto& om = std::get<InOmega>(oc);
  const bool only_vectors = om.index_set.size() == 1 && om.index_set[0] == kVectorSort;
  const bool only_scalars = om.index_set.size() == 1 && om.index_set[0] == kScalarSort;
  if (f.is_finite()) {
    if (only_vectors) return {Verdict::Ramsey, "hindman_search", "vectors under +V form a semigroup"};
    if (om.head == kScalarSort)
      return {Verdict::Ramsey, "zero_scalar_reduction",
              "a reduction with all scalars zero has FR set {0}"};
    return {Verdict::Ramsey, "zero_scalar_reduction+hindman_search",
            "zero scalars followed by a Hindman-homogeneous vector reduction"};
  }
  if (only_vectors) return {Verdict::Ramsey, "hindman_search", "vectors under +V form a semigroup"};
  if (only_scalars)
    return {Verdict::NotRamsey, "verify_field_counterexample", "no infinite field is Ramsey"};
  return {Verdict::NotRamsey, "verify_vspace_counterexample",
          "the lifted beta sequence has no homogeneous reduction for X"};
}

SortedPrefix lift_beta(const Signature& vsig, const BetaSequence& beta, const SortWord& e, const Vector& v) {
  const Field f = vsig.field_of(kVectorSort);
  if (v.size() != vsig.dim_of(kVectorSort)) throw PreconditionError("v has the wrong dimension");
  if (std::all_of(v.begin(), v.end(), [&](const Scalar& x) { return f.is_zero(x); }))
    throw PreconditionError("v must be a nonzero vector");
  SortedPrefix b{{}, e};
  for (std::size_t i = 0; i < beta.values.size(); ++i) {
    const Scalar x = f.from_rational(Rational(beta.values[i]));
    if (e.at(i) == kScalarSort) {
      b.values.push_back(Value::scalar(kScalarSort, x));
    } else if (e.at(i) == kVectorSort) {
      Vector w;
      for (const Scalar& c : v) w.push_back(f.mul(x, c));
      b.values.push_back(Value::vector(kVectorSort, std::move(w)));
    } else {
      throw PreconditionError("sort word uses a phylum other than F and V");
    }
  }
  return b;
}

CounterexampleReport verify_field_counterexample(const BetaSequence& beta, const ReductionLimits& limits) {
  if (limits.max_term_size > beta.term_bound)
    throw PreconditionError("reduction term size " + std::to_string(limits.max_term_size) +
                            " exceeds the bound the beta sequence was verified at (" +
                            std::to_string(beta.term_bound) + ")");
  const Signature fsig = make_field_signature(Field::rationals());
  const YMembership y(beta, beta.term_bound);
  SortedPrefix b{{}, SortWord::constant(kScalarSort)};
  for (const BigInt& x : beta.values) b.values.push_back(Value::scalar(kScalarSort, Rational(x)));

  CounterexampleReport report;
  report.reduction_length = std::max<std::size_t>(limits.length, 2);
  const std::size_t add = 0;
  const std::size_t mul = 1;
  enumerate_reductions(fsig, b, b.sort, report.reduction_length, {limits.max_term_size, 0},
                       [&](const SortedPrefix& a, const ReductionWitness&) {
                         ++report.reductions;
                         const std::vector<Value> pair{a.values[0], a.values[1]};
                         const Rational s = std::get<Rational>(fsig.apply(add, pair).as_scalar());
                         const Rational p = std::get<Rational>(fsig.apply(mul, pair).as_scalar());
                         report.checks += 2;
                         if (!y.contains(s))
                           report.violations.push_back("a = " + values_text(fsig, a.values) + ": a(0)+a(1) not in Y");
                         if (y.contains(p))
                           report.violations.push_back("a = " + values_text(fsig, a.values) + ": a(0)*a(1) in Y");
                         return true;
                       });
  return report;
}

std::optional<YWitness> x_membership(const YMembership& y, const Vector& v, const Vector& w) {
  const Field f = Field::rationals();
  if (v.size() != w.size()) return std::nullopt;
  std::optional<Scalar> alpha;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!f.is_zero(v[k])) {
      alpha = f.mul(w[k], f.inverse(v[k]));
      break;
    }
  if (!alpha) return std::nullopt;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!(f.mul(*alpha, v[k]) == w[k])) return std::nullopt;
  return y.query(std::get<Rational>(*alpha));
}

CounterexampleReport verify_vspace_counterexample(const BetaSequence& beta, const SortWord& e, const Vector& v,
                                                  const ReductionLimits& limits) {
  if (limits.max_term_size > beta.term_bound)
    throw PreconditionError("reduction term size exceeds the bound the beta sequence was verified at");
  const OmegaClass oc = omega_class(e, 2);
  if (!in_omega(oc)) throw PreconditionError("the sort must lie in Omega");
  const Signature vsig = make_vspace_signature(Field::rationals(), static_cast<std::uint32_t>(v.size()));
  const SortedPrefix b = lift_beta(vsig, beta, e, v);
  const YMembership y(beta, beta.term_bound);

  auto next_at = [&](std::size_t after, SortIndex s) -> std::size_t {
    for (std::size_t i = after + 1; i < after + 1 + e.prefix().size() + 2 * e.period().size(); ++i)
      if (e.at(i) == s) return i;
    throw PreconditionError("the sort has no " + std::string(s == kScalarSort ? "scalar" : "vector") +
                            " position after " + std::to_string(after));
  };

  CounterexampleReport report;
  const bool vector_head = e.at(0) == kVectorSort;
  std::size_t m1 = 0;
  std::size_t m2 = 0;
  if (vector_head) {
    m1 = next_at(0, kScalarSort);
    m2 = next_at(m1, kVectorSort);
    report.notes.push_back("vector head: c1(0) = a(0) +V a(" + std::to_string(m2) + "), c2(0) = a(" +
                           std::to_string(m1) + ") . a(" + std::to_string(m2) + ")");
  } else {
    m2 = next_at(0, kScalarSort);
    report.notes.push_back("scalar head: c1(0) = a(0) +F a(" + std::to_string(m2) + "), c2(0) = a(0) *F a(" +
                           std::to_string(m2) + ")");
  }
  report.reduction_length = std::max(limits.length, m2 + 1);
  if (report.reduction_length > limits.length)
    report.notes.push_back("reduction length raised from " + std::to_string(limits.length) + " to " +
                           std::to_string(report.reduction_length) + " to reach the required positions");
  if (b.values.size() < report.reduction_length)
    throw PreconditionError("prefix too short: " + std::to_string(b.values.size()) + " terms for reductions of length " +
                            std::to_string(report.reduction_length));

  const std::size_t vadd = 0, fadd = 1, fmul = 2, smul = 3;
  enumerate_reductions(
      vsig, b, e, report.reduction_length, {limits.max_term_size, 0}, [&](const SortedPrefix& a, const ReductionWitness&) {
        ++report.reductions;
        report.checks += 2;
        if (vector_head) {
          const Value c1 = vsig.apply(vadd, std::vector<Value>{a.values[0], a.values[m2]});
          const Value c2 = vsig.apply(smul, std::vector<Value>{a.values[m1], a.values[m2]});
          if (!x_membership(y, v, c1.as_vector()))
            report.violations.push_back("a = " + values_text(vsig, a.values) + ": c1(0) not in X");
          if (x_membership(y, v, c2.as_vector()))
            report.violations.push_back("a = " + values_text(vsig, a.values) + ": c2(0) in X");
        } else {
          const Value c1 = vsig.apply(fadd, std::vector<Value>{a.values[0], a.values[m2]});
          const Value c2 = vsig.apply(fmul, std::vector<Value>{a.values[0], a.values[m2]});
          if (!y.contains(std::get<Rational>(c1.as_scalar())))
            report.violations.push_back("a = " + values_text(vsig, a.values) + ": c1(0) not in Y");
          if (y.contains(std::get<Rational>(c2.as_scalar())))
            report.violations.push_back("a = " + values_text(vsig, a.values) + ": c2(0) in Y");
        }
        return true;
      });
  return report;
}

namespace {

std::optional<std::size_t> find_scale_op(const Signature& ksig, const Scalar& r) {
  for (std::size_t i = 0; i < ksig.num_ops(); ++i) {
    const auto* b = std::get_if<BuiltinBody>(&ksig.op(i).body);
    if (b != nullptr && b->kind == Builtin::Scale && b->factor == r) return i;
  }
  return std::nullopt;
}

}  // namespace

std::vector<Scalar> ot_k_coefficients(const Signature& ksig, const OrderlyTerm& t) {
  const Field f = ksig.field_of(kVectorSort);
  for (SortIndex s : t.inputs())
    if (s != kVectorSort) throw PreconditionError("K-terms take vector inputs only");
  if (t.output() != kVectorSort) throw PreconditionError("K-terms are vector valued");
  const Value zero = ksig.zero_vector(kVectorSort);
  Vector e1(ksig.dim_of(kVectorSort), f.zero());
  e1[0] = f.one();
  const Value basis = Value::vector(kVectorSort, e1);
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    std::vector<Value> args(t.arity(), zero);
    args[i] = basis;
    const Scalar r = evaluate(ksig, t, args).as_vector()[0];
    if (f.is_zero(r)) throw Error("K-term " + to_string(ksig, t) + " has a zero coefficient at input " + std::to_string(i));
    out.push_back(r);
  }
  return out;
}

OrderlyTerm k_term_from_coefficients(const Signature& ksig, const std::vector<Scalar>& coeffs) {
  if (coeffs.empty()) throw PreconditionError("a K-term needs at least one coefficient");
  const Field f = ksig.field_of(kVectorSort);
  auto vadd = ksig.find_builtin(Builtin::VectorAdd, kVectorSort);
  if (!vadd) throw PreconditionError("the signature has no vector addition");
  auto piece = [&](const Scalar& r) {
    if (f.is_zero(r)) throw PreconditionError("K-terms have nonzero coefficients only");
    if (f.is_one(r)) return OrderlyTerm::leaf(kVectorSort);
    auto op = find_scale_op(ksig, r);
    if (!op) throw PreconditionError("the signature has no f_" + to_string(r));
    return OrderlyTerm::node(ksig, *op, {OrderlyTerm::leaf(kVectorSort)});
  };
  OrderlyTerm t = piece(coeffs[0]);
  for (std::size_t i = 1; i < coeffs.size(); ++i) t = OrderlyTerm::node(ksig, *vadd, {t, piece(coeffs[i])});
  return t;
}

ZeroTerm finite_dim_zero_term(const Signature& ksig, const std::vector<Vector>& vectors) {
  const Field f = ksig.field_of(kVectorSort);
  const std::uint32_t dim = ksig.dim_of(kVectorSort);
  if (vectors.size() < static_cast<std::size_t>(dim) + 1)
    throw PreconditionError("need at least dim+1 vectors");
  for (const Vector& v : vectors)
    if (!ksig.contains(kVectorSort, Value::vector(kVectorSort, v))) throw PreconditionError("vector outside V");
  const auto r = null_vector(f, vectors);
  if (!r) throw Error("dim+1 vectors were found independent");
  std::vector<std::size_t> indices;
  std::vector<Scalar> coefficients;
  std::vector<Value> chosen;
  for (std::size_t i = 0; i < vectors.size(); ++i)
    if (!f.is_zero((*r)[i])) {
      indices.push_back(i);
      coefficients.push_back((*r)[i]);
      chosen.push_back(Value::vector(kVectorSort, vectors[i]));
    }
  OrderlyTerm term = k_term_from_coefficients(ksig, coefficients);
  if (!(evaluate(ksig, term, chosen) == ksig.zero_vector(kVectorSort)))
    throw Error("zero term does not vanish on its vectors");
  return ZeroTerm{std::move(indices), std::move(term), std::move(coefficients)};
}

bool leading_coeff_one(const Field& f, const Vector& w) {
  for (const Scalar& c : w)
    if (!f.is_zero(c)) return f.is_one(c);
  return false;
}

CounterexampleReport verify_k_infinite_counterexample(std::uint32_t p, std::size_t num_basis,
                                                      const ReductionLimits& limits) {
  if (p == 2) throw PreconditionError("over GF(2) the K-terms are plain sums and the argument does not apply");
  const Field f = Field::prime(p);
  if (num_basis < 1) throw PreconditionError("need at least one basis vector");
  const Signature ksig = make_k_signature(f, static_cast<std::uint32_t>(num_basis));
  SortedPrefix b{{}, SortWord::constant(kVectorSort)};
  for (std::size_t i = 0; i < num_basis; ++i) {
    Vector u(num_basis, f.zero());
    u[i] = f.one();
    b.values.push_back(Value::vector(kVectorSort, std::move(u)));
  }
  const auto f2 = find_scale_op(ksig, f.from_integer(2));

  CounterexampleReport report;
  report.reduction_length = std::max<std::size_t>(limits.length, 1);
  report.notes.push_back("X = vectors whose first nonzero coordinate is 1");
  enumerate_reductions(
      ksig, b, b.sort, report.reduction_length, {limits.max_term_size, 0},
      [&](const SortedPrefix& a, const ReductionWitness& w) {
        ++report.reductions;
        const WitnessEntry& head = w.entries[0];
        const std::string tag = "a(0) = " + to_string(ksig, head.term) + ": ";
        std::vector<Scalar> coeffs;
        try {
          coeffs = ot_k_coefficients(ksig, head.term);
        } catch (const Error& err) {
          report.violations.push_back(tag + err.what());
          return true;
        }
        Vector expect(num_basis, f.zero());
        for (std::size_t j = 0; j < coeffs.size(); ++j) expect[head.indices[j]] = coeffs[j];
        const Vector& got = a.values[0].as_vector();
        ++report.checks;
        if (!(got == expect)) report.violations.push_back(tag + "coefficients do not reproduce a(0)");
        const Scalar r0 = coeffs[0];
        report.checks += 2;
        if (f.is_one(r0)) {
          const Value moved = ksig.apply(*f2, std::vector<Value>{a.values[0]});
          if (!leading_coeff_one(f, got)) report.violations.push_back(tag + "r0 = 1 but a(0) not in X");
          if (leading_coeff_one(f, moved.as_vector())) report.violations.push_back(tag + "f2(a(0)) in X");
        } else {
          const auto inv = find_scale_op(ksig, f.inverse(r0));
          const Value moved = ksig.apply(*inv, std::vector<Value>{a.values[0]});
          if (leading_coeff_one(f, got)) report.violations.push_back(tag + "r0 != 1 but a(0) in X");
          if (!leading_coeff_one(f, moved.as_vector()))
            report.violations.push_back(tag + "f_{1/r0}(a(0)) not in X");
        }
        return true;
      });
  return report;
}

CortehResult corteh_gate(const Signature& ksig, const SortedPrefix& b, std::size_t target_len,
                         std::size_t max_term_size, std::size_t fr_max_term_size) {
  std::vector<std::size_t> unary;
  std::optional<std::size_t> vadd;
  for (std::size_t i = 0; i < ksig.num_ops(); ++i) {
    const OperationDef& o = ksig.op(i);
    if (o.arity() == 1 && o.inputs[0] == kVectorSort && o.output == kVectorSort) unary.push_back(i);
    else if (o.arity() == 2 && o.inputs[0] == kVectorSort && o.inputs[1] == kVectorSort && o.output == kVectorSort) vadd = i;
    else throw PreconditionError("operation " + o.name + " is neither unary on V nor binary on V");
  }
  if (!vadd) throw PreconditionError("the signature has no vector addition");
  auto in_s = [&](const Value& v) {
    return std::all_of(unary.begin(), unary.end(),
                       [&](std::size_t op) { return ksig.apply(op, std::vector<Value>{v}) == v; });
  };
  const Signature gsig = restrict_ops(ksig, {*vadd});

  CortehResult out;
  std::optional<std::string> obstruction;
  enumerate_reductions(ksig, b, SortWord::constant(kVectorSort), target_len, {max_term_size, 0},
                       [&](const SortedPrefix& a, const ReductionWitness& w) {
                         const FRSet fr = fr_set(gsig, a, a.sort, {fr_max_term_size, 0});
                         for (const auto& [v, _] : fr.elements)
                           if (!in_s(v)) {
                             if (!obstruction)
                               obstruction = "first candidate a = " + values_text(ksig, a.values) + " has " +
                                             ksig.format(v) + " in FR over {+V}, which some f_r moves";
                             return true;
                           }
                         out.passes = true;
                         out.a = a;
                         out.witness = w;
                         return false;
                       });
  if (out.passes)
    out.details = "found a = " + values_text(ksig, out.a->values) + " with FR over {+V} inside the fixed points";
  else
    out.details = obstruction ? *obstruction : std::string("no reduction of the required length exists");
  return out;
}

LongproofResult longproof_search(const Signature& vsig, const SortedPrefix& b, const SortWord& e, const Coloring& c,
                                 const LongproofOptions& options) {
  const Field f = vsig.field_of(kVectorSort);
  if (!f.is_finite()) throw PreconditionError("the positive construction needs a finite field");
  const OmegaClass oc = omega_class(e, vsig.num_phyla());
  if (!in_omega(oc)) throw PreconditionError("the sort must lie in Omega");
  if (c.phylum != e.at(0)) throw PreconditionError("coloring is not defined on the head phylum of the sort");
  const std::size_t vadd = *vsig.find_builtin(Builtin::VectorAdd, kVectorSort);
  const auto& om = std::get<InOmega>(oc);

  LongproofResult out;
  out.report.bounds.reduction = {options.hindman.max_block_size, options.hindman.max_block_size + 1};
  out.report.bounds.fr = options.fr;
  SortedPrefix base = b;
  ReductionWitness base_witness = identity_witness(b.values.size(), b.sort);

  const bool has_scalars = std::find(om.index_set.begin(), om.index_set.end(), kScalarSort) != om.index_set.end();
  if (has_scalars) {
    std::map<Value, std::size_t> counts;
    for (const Value& v : b.values)
      if (v.phylum() == kScalarSort) ++counts[v];
    std::optional<Value> best;
    std::size_t best_uses = 0;
    for (const auto& [v, n] : counts) {
      const std::size_t uses = n / f.additive_order(v.as_scalar());
      if (!best || uses > best_uses) {
        best = v;
        best_uses = uses;
      }
    }
    if (!best) throw PreconditionError("b has no scalar terms");
    out.rho = best;
    out.s = f.additive_order(best->as_scalar());
    ConstructedReduction z = zero_scalar_reduction(vsig, b, e, *best, out.s);
    out.stages.push_back("zero_scalar_reduction: rho = " + vsig.format(*best) + ", s = " + std::to_string(out.s) +
                         ", length " + std::to_string(z.a.values.size()));
    base = std::move(z.a);
    base_witness = std::move(z.witness);
  }
  if (base.values.size() < options.target_len) {
    out.stages.push_back("prefix too short for the requested length");
    return out;
  }

  auto finish = [&](const SortedPrefix& a, const ReductionWitness& w_on_base) {
    const ReductionWitness w = compose_witnesses(vsig, w_on_base, base_witness);
    if (!check_witness(vsig, a, b, w)) throw Error("longproof construction produced an invalid witness");
    const FRSet fr = fr_set(vsig, a, e, options.fr);
    if (auto col = monochromatic_color(fr, c)) {
      out.report.outcome = Found{a, w, *col};
      out.stages.push_back("FR set of size " + std::to_string(fr.elements.size()) + " is monochromatic");
    } else {
      out.stages.push_back("FR set of the merged reduction is not monochromatic");
    }
  };

  if (e.at(0) == kScalarSort) {
    SortedPrefix a{std::vector<Value>(base.values.begin(), base.values.begin() + static_cast<std::ptrdiff_t>(options.target_len)), e};
    finish(a, identity_witness(options.target_len, e));
    return out;
  }

  std::size_t vector_slots = 0;
  bool zero_in_fr = false;
  bool seen_scalar = false;
  for (std::size_t j = 0; j < options.target_len; ++j) {
    if (e.at(j) == kVectorSort) {
      ++vector_slots;
      zero_in_fr = zero_in_fr || seen_scalar;
    } else {
      seen_scalar = true;
    }
  }
  auto [vectors, positions] = sort_subsequence(base, kVectorSort);
  std::vector<Value> extra;
  if (zero_in_fr) extra.push_back(vsig.zero_vector(kVectorSort));
  const HomogeneityReport h = hindman_search(vsig, vadd, vectors, c, vector_slots, options.hindman, extra);
  out.report.stats = h.stats;
  if (!h.found()) {
    out.stages.push_back("hindman_search exhausted on " + std::to_string(vectors.values.size()) + " vectors");
    return out;
  }
  out.stages.push_back("hindman_search found " + values_text(vsig, h.result().a.values));
  std::vector<WitnessEntry> blocks = h.result().witness.entries;
  for (WitnessEntry& en : blocks)
    for (std::size_t& i : en.indices) i = positions[i];
  const ConstructedReduction merged = merge_sorted_reduction(vsig, h.result().a, base, e, blocks, options.target_len);
  if (merged.exhaustion) {
    out.stages.push_back("merge_sorted_reduction: " + *merged.exhaustion);
    return out;
  }
  out.stages.push_back("merge_sorted_reduction built " + values_text(vsig, merged.a.values));
  finish(merged.a, merged.witness);
  return out;
}

}  // namespace ralg
