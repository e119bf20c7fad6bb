#include "ralg/signature.hpp"

#include <map>
#include <set>

#include "ralg/error.hpp"

namespace ralg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string sort_label(const Signature& sig, SortIndex s) {
  if (!sig.valid_sort(s)) return "#" + std::to_string(s.id);
  return sig.phylum(s).name;
}

}  // namespace

const Phylum& Signature::phylum(SortIndex s) const {
  if (!valid_sort(s)) throw PreconditionError("invalid sort index " + std::to_string(s.id));
  return phyla_[s.id];
}

const OperationDef& Signature::op(std::size_t i) const {
  if (i >= ops_.size()) throw PreconditionError("invalid operation index " + std::to_string(i));
  return ops_[i];
}

std::optional<SortIndex> Signature::find_phylum(std::string_view name) const {
  for (std::size_t i = 0; i < phyla_.size(); ++i)
    if (phyla_[i].name == name) return SortIndex{static_cast<std::uint32_t>(i)};
  return std::nullopt;
}

std::optional<std::size_t> Signature::find_op(std::string_view name) const {
  for (std::size_t i = 0; i < ops_.size(); ++i)
    if (ops_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> Signature::find_builtin(Builtin kind, SortIndex out) const {
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const auto* b = std::get_if<BuiltinBody>(&ops_[i].body);
    if (b != nullptr && b->kind == kind && ops_[i].output == out) return i;
  }
  return std::nullopt;
}

bool Signature::is_field(SortIndex s) const {
  const auto& k = phylum(s).kind;
  return std::holds_alternative<PrimeField>(k) || std::holds_alternative<RationalField>(k);
}

bool Signature::is_vector_space(SortIndex s) const { return std::holds_alternative<VectorSpace>(phylum(s).kind); }

Field Signature::field_of(SortIndex s) const {
  const auto& k = phylum(s).kind;
  if (const auto* pf = std::get_if<PrimeField>(&k)) return Field::prime(pf->p);
  if (std::holds_alternative<RationalField>(k)) return Field::rationals();
  if (const auto* vs = std::get_if<VectorSpace>(&k)) {
    if (vs->field == s || is_vector_space(vs->field))
      throw PreconditionError("vector phylum " + phylum(s).name + " does not reference a field");
    return field_of(vs->field);
  }
  throw PreconditionError("phylum " + phylum(s).name + " has no field");
}

std::uint32_t Signature::dim_of(SortIndex s) const {
  const auto* vs = std::get_if<VectorSpace>(&phylum(s).kind);
  if (vs == nullptr) throw PreconditionError("phylum " + phylum(s).name + " is not a vector space");
  return vs->dim;
}

std::optional<std::size_t> Signature::cardinality(SortIndex s) const {
  return std::visit(overloaded{
                        [](const FiniteEnumerated& f) -> std::optional<std::size_t> { return f.atoms.size(); },
                        [](const PrimeField& f) -> std::optional<std::size_t> { return f.p; },
                        [](const RationalField&) -> std::optional<std::size_t> { return std::nullopt; },
                        [&](const VectorSpace& v) -> std::optional<std::size_t> {
                          auto q = cardinality(v.field);
                          if (!q) return std::nullopt;
                          std::size_t n = 1;
                          for (std::uint32_t i = 0; i < v.dim; ++i) n *= *q;
                          return n;
                        },
                    },
                    phylum(s).kind);
}

std::size_t Signature::element_index(const Value& v) const {
  if (!cardinality(v.phylum())) throw PreconditionError("phylum " + phylum(v.phylum()).name + " is infinite");
  if (v.is_atom()) return v.as_atom().ordinal;
  if (v.is_scalar()) return std::get<Residue>(v.as_scalar()).value;
  const Field f = field_of(v.phylum());
  std::size_t idx = 0;
  for (const Scalar& c : v.as_vector()) idx = idx * f.characteristic() + std::get<Residue>(c).value;
  return idx;
}

Value Signature::element_at(SortIndex s, std::size_t index) const {
  auto card = cardinality(s);
  if (!card || index >= *card) throw PreconditionError("element index out of range for " + phylum(s).name);
  const auto& k = phylum(s).kind;
  if (std::holds_alternative<FiniteEnumerated>(k)) return Value::atom(s, static_cast<std::uint32_t>(index));
  if (std::holds_alternative<PrimeField>(k)) return Value::scalar(s, Residue{static_cast<std::uint32_t>(index)});
  const auto& vs = std::get<VectorSpace>(k);
  const std::uint32_t p = field_of(s).characteristic();
  Vector coords(vs.dim, Residue{0});
  for (std::size_t i = vs.dim; i-- > 0;) {
    coords[i] = Residue{static_cast<std::uint32_t>(index % p)};
    index /= p;
  }
  return Value::vector(s, std::move(coords));
}

std::vector<Value> Signature::elements(SortIndex s) const {
  auto card = cardinality(s);
  if (!card) throw PreconditionError("phylum " + phylum(s).name + " is infinite");
  std::vector<Value> out;
  out.reserve(*card);
  for (std::size_t i = 0; i < *card; ++i) out.push_back(element_at(s, i));
  return out;
}

bool Signature::contains(SortIndex s, const Value& v) const {
  if (!valid_sort(s) || v.phylum() != s) return false;
  return std::visit(overloaded{
                        [&](const FiniteEnumerated& f) { return v.is_atom() && v.as_atom().ordinal < f.atoms.size(); },
                        [&](const PrimeField&) { return v.is_scalar() && field_of(s).contains(v.as_scalar()); },
                        [&](const RationalField&) { return v.is_scalar() && field_of(s).contains(v.as_scalar()); },
                        [&](const VectorSpace& vs) {
                          if (!v.is_vector() || v.as_vector().size() != vs.dim) return false;
                          const Field f = field_of(s);
                          for (const Scalar& c : v.as_vector())
                            if (!f.contains(c)) return false;
                          return true;
                        },
                    },
                    phylum(s).kind);
}

Value Signature::zero_vector(SortIndex s) const {
  const Field f = field_of(s);
  return Value::vector(s, Vector(dim_of(s), f.zero()));
}

Value Signature::make_scalar(SortIndex s, std::int64_t n) const {
  if (!is_field(s)) throw PreconditionError("phylum " + phylum(s).name + " is not a field");
  return Value::scalar(s, field_of(s).from_integer(n));
}

Value Signature::make_vector(SortIndex s, const std::vector<std::int64_t>& coords) const {
  if (coords.size() != dim_of(s)) throw PreconditionError("vector has wrong dimension for " + phylum(s).name);
  const Field f = field_of(s);
  Vector out;
  out.reserve(coords.size());
  for (std::int64_t c : coords) out.push_back(f.from_integer(c));
  return Value::vector(s, std::move(out));
}

Value Signature::apply(std::size_t i, std::span<const Value> args) const {
  const OperationDef& o = op(i);
  if (args.size() != o.arity())
    throw PreconditionError("operation " + o.name + " expects " + std::to_string(o.arity()) + " arguments, got " +
                            std::to_string(args.size()));
  for (std::size_t k = 0; k < args.size(); ++k)
    if (args[k].phylum() != o.inputs[k])
      throw PreconditionError("operation " + o.name + ": argument " + std::to_string(k) + " has sort " +
                              sort_label(*this, args[k].phylum()) + ", expected " + sort_label(*this, o.inputs[k]));
  return apply_unchecked(i, args);
}

Value Signature::apply_unchecked(std::size_t i, std::span<const Value> args) const {
  const OperationDef& o = ops_[i];
  return std::visit(
      overloaded{
          [&](const TableBody& t) {
            std::size_t idx = 0;
            for (std::size_t k = 0; k < args.size(); ++k) idx = idx * *cardinality(o.inputs[k]) + element_index(args[k]);
            if (idx >= t.outputs.size()) throw PreconditionError("operation " + o.name + ": table is not total");
            return t.outputs[idx];
          },
          [&](const ConstantBody& c) { return c.value; },
          [&](const CustomBody& c) { return c.fn(args); },
          [&](const BuiltinBody& b) {
            const Field f = field_of(o.output);
            switch (b.kind) {
              case Builtin::FieldAdd:
                return Value::scalar(o.output, f.add(args[0].as_scalar(), args[1].as_scalar()));
              case Builtin::FieldMul:
                return Value::scalar(o.output, f.mul(args[0].as_scalar(), args[1].as_scalar()));
              case Builtin::VectorAdd: {
                const Vector& u = args[0].as_vector();
                const Vector& w = args[1].as_vector();
                Vector out(u.size());
                for (std::size_t k = 0; k < u.size(); ++k) out[k] = f.add(u[k], w[k]);
                return Value::vector(o.output, std::move(out));
              }
              case Builtin::ScalarMul: {
                const Scalar& r = args[0].as_scalar();
                const Vector& u = args[1].as_vector();
                Vector out(u.size());
                for (std::size_t k = 0; k < u.size(); ++k) out[k] = f.mul(r, u[k]);
                return Value::vector(o.output, std::move(out));
              }
              case Builtin::Scale: {
                const Vector& u = args[0].as_vector();
                Vector out(u.size());
                for (std::size_t k = 0; k < u.size(); ++k) out[k] = f.mul(b.factor, u[k]);
                return Value::vector(o.output, std::move(out));
              }
            }
            throw PreconditionError("unknown builtin");
          },
      },
      o.body);
}

std::string Signature::format(const Value& v) const {
  if (v.is_atom()) {
    const auto* fe = valid_sort(v.phylum()) ? std::get_if<FiniteEnumerated>(&phylum(v.phylum()).kind) : nullptr;
    if (fe != nullptr && v.as_atom().ordinal < fe->atoms.size()) return "'" + fe->atoms[v.as_atom().ordinal];
    return "'#" + std::to_string(v.as_atom().ordinal);
  }
  if (v.is_scalar()) return to_string(v.as_scalar());
  std::string out = "<";
  const Vector& u = v.as_vector();
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (k > 0) out += ' ';
    out += to_string(u[k]);
  }
  return out + ">";
}

std::vector<std::string> validate_signature(const Signature& sig) {
  std::vector<std::string> out;
  const std::size_t n = sig.num_phyla();

  std::set<std::string> names;
  for (const Phylum& ph : sig.phyla())
    if (!names.insert(ph.name).second) out.push_back("duplicate phylum name '" + ph.name + "'");

  // Atoms of finite phyla must be pairwise disjoint across phyla and distinct within one.
  std::map<std::string, std::size_t> atom_owner;
  for (std::size_t i = 0; i < n; ++i) {
    const Phylum& ph = sig.phyla()[i];
    std::visit(overloaded{
                   [&](const FiniteEnumerated& f) {
                     if (f.atoms.empty()) out.push_back("phylum " + ph.name + " is empty");
                     std::set<std::string> local;
                     for (const std::string& a : f.atoms) {
                       if (!local.insert(a).second) out.push_back("phylum " + ph.name + " repeats atom '" + a + "'");
                       auto [it, fresh] = atom_owner.emplace(a, i);
                       if (!fresh && it->second != i)
                         out.push_back("phyla not disjoint: atom '" + a + "' belongs to " + sig.phyla()[it->second].name +
                                       " and " + ph.name);
                     }
                   },
                   [&](const PrimeField& f) {
                     if (!is_prime(f.p)) out.push_back("phylum " + ph.name + ": " + std::to_string(f.p) + " is not prime");
                   },
                   [](const RationalField&) {},
                   [&](const VectorSpace& v) {
                     if (v.dim < 1) out.push_back("phylum " + ph.name + ": dimension must be at least 1");
                     if (v.field.id >= n || !(std::holds_alternative<PrimeField>(sig.phyla()[v.field.id].kind) ||
                                              std::holds_alternative<RationalField>(sig.phyla()[v.field.id].kind)))
                       out.push_back("phylum " + ph.name + ": scalar field reference is not a field phylum");
                   },
               },
               ph.kind);
  }
  if (!out.empty()) return out;  // op checks below rely on well-formed phyla

  for (const OperationDef& o : sig.ops()) {
    const std::string tag = "operation " + o.name + ": ";
    if (o.inputs.empty()) out.push_back(tag + "arity must be at least 1");
    bool sorts_ok = sig.valid_sort(o.output);
    for (SortIndex s : o.inputs) sorts_ok = sorts_ok && sig.valid_sort(s);
    if (!sorts_ok) {
      out.push_back(tag + "sort index out of range");
      continue;
    }
    std::visit(overloaded{
                   [&](const TableBody& t) {
                     std::size_t expected = 1;
                     for (SortIndex s : o.inputs) {
                       auto c = sig.cardinality(s);
                       if (!c) {
                         out.push_back(tag + "table over infinite phylum " + sig.phylum(s).name);
                         return;
                       }
                       expected *= *c;
                     }
                     if (t.outputs.size() != expected) {
                       out.push_back(tag + "table is partial (" + std::to_string(t.outputs.size()) + " of " +
                                     std::to_string(expected) + " entries)");
                       return;
                     }
                     for (const Value& v : t.outputs)
                       if (!sig.contains(o.output, v)) {
                         out.push_back(tag + "table entry " + sig.format(v) + " lies outside " + sig.phylum(o.output).name);
                         return;
                       }
                   },
                   [&](const ConstantBody& c) {
                     if (!sig.contains(o.output, c.value)) out.push_back(tag + "constant lies outside its output phylum");
                   },
                   [&](const CustomBody& c) {
                     if (!c.fn) out.push_back(tag + "missing evaluator");
                   },
                   [&](const BuiltinBody& b) {
                     auto field_of_sort = [&](SortIndex s) -> std::optional<SortIndex> {
                       if (sig.is_field(s)) return s;
                       if (sig.is_vector_space(s)) return std::get<VectorSpace>(sig.phylum(s).kind).field;
                       return std::nullopt;
                     };
                     const auto& in = o.inputs;
                     bool ok = false;
                     switch (b.kind) {
                       case Builtin::FieldAdd:
                       case Builtin::FieldMul:
                         ok = in.size() == 2 && sig.is_field(o.output) && in[0] == o.output && in[1] == o.output;
                         break;
                       case Builtin::VectorAdd:
                         ok = in.size() == 2 && sig.is_vector_space(o.output) && in[0] == o.output && in[1] == o.output;
                         break;
                       case Builtin::ScalarMul:
                         ok = in.size() == 2 && sig.is_vector_space(o.output) && in[1] == o.output &&
                              field_of_sort(o.output) == in[0];
                         break;
                       case Builtin::Scale:
                         ok = in.size() == 1 && sig.is_vector_space(o.output) && in[0] == o.output &&
                              sig.field_of(o.output).contains(b.factor);
                         break;
                     }
                     if (!ok) out.push_back(tag + "builtin does not match its declared sorts");
                   },
               },
               o.body);
  }
  return out;
}

Signature restrict_ops(const Signature& sig, const std::vector<std::size_t>& keep) {
  std::vector<OperationDef> ops;
  for (std::size_t i : keep) ops.push_back(sig.op(i));
  return Signature(sig.phyla(), std::move(ops));
}

}  // namespace ralg
