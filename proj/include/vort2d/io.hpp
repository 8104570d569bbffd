#pragma once

// CSV / JSON persistence. All numeric output goes through fmt_double
// (17 significant digits, locale-free), so identical data produces
// identical bytes.

#include <cstdint>
#include <string>
#include <vector>

#include "vort2d/solver.hpp"
#include "vort2d/spectral.hpp"

namespace vort {

std::string fmt_double(double v);

std::uint64_t fnv1a(const std::string& s);

// GridField: header line "n=<n>", then n rows of n comma-separated values.
void write_grid_csv(const std::string& path, const GridField& g);
GridField read_grid_csv(const std::string& path);

// SpectralField: one row "k1,k2,re,im" per stored mode, k1 then k2 ascending.
void write_spectral_csv(const std::string& path, const SpectralField& f);
SpectralField read_spectral_csv(const std::string& path);

std::string config_canonical_string(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

struct Manifest {
    std::string artifact_version;
    std::string subcommand;
    std::uint64_t config_hash = 0;
    int threads = 1;
    std::uint64_t seed = 0;
    std::string wall_clock_utc;  // timestamps live only here
};

void write_manifest(const std::string& dir, const Manifest& m);

std::string artifact_version();

}  // namespace vort
