#pragma once

#include <string>

#include <json.hpp>

#include "ghl/theorems.hpp"
#include "ghl/valuation.hpp"
#include "ghl/world.hpp"

namespace ghl {

// 17 significant digits; round-trips binary64 exactly.
std::string format_double(double v);

// Schema "ghl-world/1"
nlohmann::json to_json(const RewardTable& table);
nlohmann::json to_json(const OutcomePartition& partition);
nlohmann::json to_json(const FiniteModel& model);
nlohmann::json to_json(const WorldPrior& prior);
nlohmann::json to_json(const ProxyChannel& channel);

RewardTable reward_table_from_json(const nlohmann::json& j);
OutcomePartition partition_from_json(const nlohmann::json& j);
FiniteModel model_from_json(const nlohmann::json& j);
WorldPrior prior_from_json(const nlohmann::json& j);
ProxyChannel channel_from_json(const nlohmann::json& j);

// Schema "ghl-report/1"
nlohmann::json to_json(const ExtReal& v);
nlohmann::json report_to_json(const VerificationReport& report);
nlohmann::json baseline_to_json(const BaselineReport& report);
nlohmann::json attainability_to_json(const AttainabilityProfile& profile);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ghl
