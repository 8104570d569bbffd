#pragma once

// JSON configuration: flat keys, unknown keys rejected, every violation
// reported with the constraint it breaks. Environment variables prefixed
// VORT2D_ override file values (e.g. VORT2D_SEED=7).

#include <string>

#include "vort2d/solver.hpp"

namespace vort {

RunConfig parse_config_text(const std::string& json_text);
RunConfig parse_config_file(const std::string& path);

// Applies VORT2D_<KEY> environment overrides for every config key.
void apply_env_overrides(RunConfig& cfg);

std::string config_to_json(const RunConfig& cfg);

}  // namespace vort
