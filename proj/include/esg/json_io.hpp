#pragma once

#include <string>

#include "esg/core.hpp"
#include "json.hpp"

namespace esg {

// Interchange format used by every CLI subcommand:
//   {"n":int,"k":int,"tau":int|"inf","values":[...],"matrix":[[0/1,...],...],
//    "metadata":{...}}
// Matrix is row-major; row i describes target t_{i+1}.
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

nlohmann::json plan_to_json(const SensingPlan& psi);      // null = unsensed
SensingPlan plan_from_json(const nlohmann::json& j);

nlohmann::json ordering_to_json(const TargetOrdering& sigma);
TargetOrdering ordering_from_json(const nlohmann::json& j);

// Comma-separated positions, e.g. "3,1,2".
TargetOrdering parse_ordering(const std::string& text);

}  // namespace esg
