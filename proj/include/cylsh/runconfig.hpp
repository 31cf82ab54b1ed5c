// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>

#include "cylsh/config.hpp"
#include "cylsh/experiments.hpp"
#include "cylsh/solver.hpp"

namespace cylsh {

/// Keys accepted in each section of a run config.
const std::map<std::string, std::set<std::string>>& run_config_schema();

/// Parses and checks a run config: unknown sections or keys, and malformed
/// values, raise ConfigError with the offending line.
Config load_run_config(const std::string& path);
Config parse_run_config(const std::string& text, const std::string& source = "<config>");

SolveOptions solve_options_from(const Config& cfg);
ExperimentConfig experiment_config_from(const Config& cfg);

/// Writes every resolved setting back into `cfg` (so the dump is complete).
void record_resolved(Config& cfg, const ExperimentConfig& e);

}  // namespace cylsh
