#pragma once

#include <json.hpp>
#include <string>

#include "bicbandit/audit.hpp"

namespace bic {

using Json = nlohmann::json;

Json prior_to_json(const ArmPrior& p);
ArmPrior prior_from_json(const Json& j);
Json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const Json& j);

Json params_to_json(const PriorParams& p);
Json lower_bound_to_json(const LowerBoundReport& rep);
Json explorability_to_json(const ExplorabilityReport& rep);
Json schedule_to_json(const PhaseSchedule& s);
Json policy_to_json(const PaddedPolicy& p, i64 table_cap = i64(1) << 16);

std::string bic_report_csv(const BICReport& rep);
std::string trace_csv(const RunTrace& trace, const PhaseSchedule* sched);

}  // namespace bic
