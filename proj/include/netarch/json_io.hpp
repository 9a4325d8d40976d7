#ifndef NETARCH_JSON_IO_HPP
#define NETARCH_JSON_IO_HPP

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "netarch/core.hpp"
#include "netarch/network.hpp"

// Canonical JSON for every core type: documented field names, matrices
// encoded row-major as {"rows", "cols", "data"}. nlohmann emits the shortest
// representation that round-trips doubles exactly, and objects sort their
// keys, so serialize(deserialize(x)) is byte-identical.

namespace netarch {

using Json = nlohmann::json;

Json to_json(const ReturnPanel&);
Json to_json(const LogVolPanel&);
Json to_json(const ZeroPolicy&);
Json to_json(const EdgeWeightMatrix&);
Json to_json(const DistanceMatrix&);
Json to_json(const UnivariateFit&);
Json to_json(const NetworkFit&);
Json to_json(const ForecastTable&);

ReturnPanel panel_from_json(const Json&);
LogVolPanel logvol_from_json(const Json&);
ZeroPolicy zero_policy_from_json(const Json&);
EdgeWeightMatrix edge_weights_from_json(const Json&);
DistanceMatrix distance_from_json(const Json&);
UnivariateFit univariate_fit_from_json(const Json&);
NetworkFit network_fit_from_json(const Json&);
ForecastTable forecast_table_from_json(const Json&);

std::string dump_canonical(const Json&);

/// Wraps a payload as {"type", "hash", "payload"} where hash content-
/// addresses the canonical payload bytes.
std::string wrap_artifact(const std::string& type, const Json& payload);
Json read_artifact(const std::string& text, const std::string& expected_type);

void write_file(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

}  // namespace netarch

#endif
