#pragma once

#include "stl/experiments.hpp"

#include <string>

namespace stl {

/// Parses an experiment config from JSON. Unknown keys are rejected; error
/// messages name the offending JSON path. See load_config for the schema.
ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Round-trippable echo of a config (parse_config_json(dump) == config).
std::string dump_config_json(const ExperimentConfig& config);

/// JSON summary mirroring the CSV rows plus a config echo.
void save_study_json(const std::string& path, const StudyReport& report,
                     const ExperimentConfig& config);

}  // namespace stl
