#pragma once

#include <string>

#include "json.hpp"
#include "nbm/ensemble.hpp"
#include "nbm/identities.hpp"
#include "nbm/montecarlo.hpp"

namespace nbm {

using Json = nlohmann::json;

// Schema: {"intervals": [[lo, hi], ...]} with "-inf"/"inf" string sentinels
// for unbounded ends. Unknown keys are rejected.
Json to_json(const IntervalUnion& e);
IntervalUnion interval_from_json(const Json& j);

// Schema: {"q":, "p":, "m": [...], "n": [...], "a": [...], "b": [...], "t":}
Json to_json(const EnsembleSpec& s);
EnsembleSpec ensemble_from_json(const Json& j);

Json to_json(const ResidualReport& r);
Json to_json(const Estimate& e);

// FNV-1a of the canonical (sorted-key, no-whitespace) serialization
std::string content_hash(const Json& j);

} // namespace nbm
