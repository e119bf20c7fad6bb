#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "ralg/homogeneity.hpp"
#include "ralg/unary.hpp"
#include "ralg/vspace.hpp"

namespace ralg::report {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

Json value_json(const Signature& sig, const Value& v);
Json scalar_json(const Scalar& s);
Json prefix_json(const Signature& sig, const SortedPrefix& p);
Json witness_json(const Signature& sig, const ReductionWitness& w);
Json frset_json(const Signature& sig, const FRSet& fr);
Json homogeneity_json(const Signature& sig, const HomogeneityReport& r);
Json counterexample_json(const CounterexampleReport& r);
Json partition_json(const ThreePartition& p);

/// The common report envelope; wall_ms is the only nondeterministic field.
Json envelope(std::string_view command, std::string_view experiment, std::string_view inputs_digest, Json bounds,
              std::string_view outcome, Json payload, double wall_ms);

}  // namespace ralg::report
