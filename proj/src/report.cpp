#include "ralg/report.hpp"

#include <array>
#include <cstdio>

#include <openssl/evp.h>

namespace ralg::report {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr);
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

Json scalar_json(const Scalar& s) {
  if (const auto* r = std::get_if<Residue>(&s)) return r->value;
  return to_string(s);
}

Json value_json(const Signature& sig, const Value& v) {
  if (v.is_atom()) return sig.format(v);
  if (v.is_scalar()) return scalar_json(v.as_scalar());
  Json arr = Json::array();
  for (const Scalar& s : v.as_vector()) arr.push_back(scalar_json(s));
  return arr;
}

Json prefix_json(const Signature& sig, const SortedPrefix& p) {
  Json values = Json::array();
  for (const Value& v : p.values) values.push_back(value_json(sig, v));
  return Json{{"sort", p.sort.to_string()}, {"values", values}};
}

Json witness_json(const Signature& sig, const ReductionWitness& w) {
  Json arr = Json::array();
  for (const WitnessEntry& e : w.entries) arr.push_back(Json{{"term", to_string(sig, e.term)}, {"indices", e.indices}});
  return arr;
}

Json frset_json(const Signature& sig, const FRSet& fr) {
  Json elems = Json::array();
  for (const auto& [v, w] : fr.elements) elems.push_back(Json{{"value", value_json(sig, v)}, {"witness", witness_json(sig, w)}});
  return Json{{"bounds", {{"max_term_size", fr.bounds.max_term_size}, {"max_arity", fr.bounds.max_arity}}},
              {"target_len", fr.target_len},
              {"truncated", fr.truncated},
              {"elements", elems}};
}

Json homogeneity_json(const Signature& sig, const HomogeneityReport& r) {
  Json out;
  out["outcome"] = r.found() ? "Found" : "Exhausted";
  if (r.found()) {
    const Found& f = r.result();
    out["color"] = f.color;
    out["a"] = prefix_json(sig, f.a);
    out["witness"] = witness_json(sig, f.witness);
  }
  out["stats"] = Json{{"nodes", r.stats.nodes}, {"max_depth", r.stats.max_depth}};
  return out;
}

Json counterexample_json(const CounterexampleReport& r) {
  return Json{{"reductions", r.reductions},
              {"checks", r.checks},
              {"reduction_length", r.reduction_length},
              {"violations", r.violations},
              {"notes", r.notes}};
}

Json partition_json(const ThreePartition& p) {
  Json parts = Json::array();
  for (const auto& part : p.parts) parts.push_back(part);
  return parts;
}

Json envelope(std::string_view command, std::string_view experiment, std::string_view inputs_digest, Json bounds,
              std::string_view outcome, Json payload, double wall_ms) {
  return Json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"experiment", experiment},
              {"inputs_digest", inputs_digest},
              {"bounds", std::move(bounds)},
              {"outcome", outcome},
              {"payload", std::move(payload)},
              {"wall_ms", wall_ms}};
}

}  // namespace ralg::report
