#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "fairpost/audit.hpp"
#include "fairpost/binary_adjust.hpp"
#include "fairpost/policy.hpp"
#include "fairpost/scenarios.hpp"

namespace fairpost {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const AuditReport& report);
nlohmann::json to_json(const AdjustmentResult& result,
                       std::span<const std::string> group_names);
nlohmann::json to_json(const PolicyReport& report, std::span<const std::string> group_names);
nlohmann::json to_json(const TwoSampleReport& report);

/// Per-group conditional ROC curves and achievable regions as plain arrays of
/// (threshold, fpr, tpr) for external plotting.
nlohmann::json roc_export(const ConditionalScoreDistribution& dist);

/// Thresholds may be +/-inf; JSON carries them as strings "inf"/"-inf".
nlohmann::json json_number_or_inf(double v);

}  // namespace fairpost
