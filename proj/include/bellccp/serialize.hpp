// JSON (de)serialization for the core types plus sweep-report export.

#pragma once

#include <string>

#include <json.hpp>

#include "bellccp/ccp.hpp"
#include "bellccp/functionals.hpp"
#include "bellccp/polytope.hpp"
#include "bellccp/quantum.hpp"
#include "bellccp/sweep.hpp"

namespace bellccp {

using Json = nlohmann::json;

Json behavior_to_json(const Behavior& p);
Behavior behavior_from_json(const Json& j);

Json functional_to_json(const BellFunctional& f);
Json functional_to_json(const CorrelationFunctional& f);
BellFunctional bell_functional_from_json(const Json& j);
CorrelationFunctional correlation_functional_from_json(const Json& j);

Json task_to_json(const CCPTask& t);
CCPTask task_from_json(const Json& j);

Json strategy_to_json(const DeterministicStrategy& s);
DeterministicStrategy strategy_from_json(const Json& j);

Json ccp_behavior_to_json(const CCPBehavior& p);
CCPBehavior ccp_behavior_from_json(const Json& j);

Json vertex_set_to_json(const VertexSet& v);

Json sweep_report_to_json(const SweepReport& r);
std::string sweep_report_to_csv(const SweepReport& r);

}  // namespace bellccp
