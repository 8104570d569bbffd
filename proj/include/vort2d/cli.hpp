#pragma once

// Subcommand dispatcher: computes, then writes manifest + CSV/JSON payloads
// into the output directory. Returns the process exit code (0 pass,
// 1 acceptance failure). Usage/config errors throw std::invalid_argument
// and map to exit 2 in the binary.

#include <string>

#include "vort2d/solver.hpp"

namespace vort {

bool known_subcommand(const std::string& name);

int dispatch(const std::string& subcommand, const RunConfig& cfg,
             const std::string& out_dir);

}  // namespace vort
