#pragma once

#include <json.hpp>

#include "lbo/simulate.hpp"
#include "lbo/solver.hpp"
#include "lbo/sweep.hpp"
#include "lbo/types.hpp"

namespace lbo {

// nlohmann ADL hooks. Parsing is lenient: absent fields keep their
// defaults, so an empty document is a valid configuration.

void to_json(nlohmann::json& j, const SystemParams& params);
void from_json(const nlohmann::json& j, SystemParams& params);

void to_json(nlohmann::json& j, const DelayModel& model);
void from_json(const nlohmann::json& j, DelayModel& model);

void to_json(nlohmann::json& j, const PolicySpec& spec);
void from_json(const nlohmann::json& j, PolicySpec& spec);

void to_json(nlohmann::json& j, const SimConfig& config);
void from_json(const nlohmann::json& j, SimConfig& config);

void to_json(nlohmann::json& j, const SweepSpec& spec);

void to_json(nlohmann::json& j, const ExperimentConfig& config);
void from_json(const nlohmann::json& j, ExperimentConfig& config);

void to_json(nlohmann::json& j, const ThresholdReport& report);
void to_json(nlohmann::json& j, const SolveResult& result);
void to_json(nlohmann::json& j, const SimulationReport& report);

/// Reads and parses a configuration file; "" yields the defaults.
ExperimentConfig load_config(const std::string& path);

}  // namespace lbo
