#pragma once

// Exponential-Euler integrator for the truncated mild vorticity equation,
// the Picard fixed-point construction, and the a priori bound monitor.
//
// One step of the mild form:
//   xi(t+dt) = S(dt) xi(t) + Phi(dt) P[-div q_N(xi(t))] + dz,
// with S the heat semigroup, Phi the mode-wise weight
// (1 - e^{-|k|^2 dt})/|k|^2, P the 2/3-dealias projection and dz the exact
// OU noise increment. The linear part is exact, so with q_N == 0 the
// trajectory equals S(t) xi_0 + z(t) at every grid time.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vort2d/biot_savart.hpp"
#include "vort2d/noise.hpp"
#include "vort2d/spectral.hpp"

namespace vort {

struct RunConfig {
    int K = 21;              // solution cutoff
    int n = 64;              // collocation grid (power of two, >= 2K+2)
    double dt = 0.01;
    double T = 0.5;
    double b = 1.0;          // noise covariance exponent
    TruncationSpec trunc;    // N (level) and p
    std::uint64_t seed = 12345;
    std::string ic = "zero";  // zero | sin_x1 | mix | random
    double ic_amplitude = 1.0;
    bool noise_enabled = true;
    bool nonlinearity_enabled = true;
    double noise_amplitude = 1.0;
    int K_w = 0;             // noise cutoff; 0 means "same as K"

    // Probe point for density / Malliavin diagnostics.
    double probe_t = -1.0;   // < 0 means T/2
    double probe_x1 = 3.141592653589793238462643;
    double probe_x2 = 3.141592653589793238462643;

    int mc_samples = 10000;
    int snapshot_every = 0;

    int steps() const { return static_cast<int>(T / dt + 0.5); }
    int noise_cutoff() const { return K_w > 0 ? K_w : K; }
    double effective_probe_t() const { return probe_t >= 0.0 ? probe_t : 0.5 * T; }
    NoiseSpec noise_spec() const {
        NoiseSpec s;
        s.b = b;
        s.cutoff = noise_cutoff();
        s.dt = dt;
        s.seed = seed;
        s.amplitude = noise_enabled ? noise_amplitude : 0.0;
        return s;
    }
};

// Throws std::invalid_argument naming the violated constraint.
void validate_run_config(const RunConfig& cfg, bool for_malliavin = false);

SpectralField make_initial_condition(const RunConfig& cfg);

struct BlowUpError : std::runtime_error {
    explicit BlowUpError(double time)
        : std::runtime_error("solver: L^2 norm exceeded 1e12 at t = " +
                             std::to_string(time)),
          t(time) {}
    double t;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> states;
    std::vector<SpectralField> z_states;
    std::optional<double> sigma_hit;  // first grid time with ||xi||_{L^p} >= N
};

// One exponential-Euler step; dz is the shaped noise increment.
SpectralField step(const SpectralField& xi, const SpectralField& dz,
                   const RunConfig& cfg);

Trajectory run(const RunConfig& cfg);
// Same integrator with an explicit noise path (bump-and-rerun oracles).
Trajectory run_with_path(const RunConfig& cfg, const NoisePath& path);

struct PicardResult {
    std::vector<SpectralField> limit;   // fixed-point iterate at grid times
    std::vector<double> diffs;          // sup_t ||xi^{k+1} - xi^k||_{L^p}
    std::vector<double> ratios;         // diffs[k+1]/diffs[k]
    double contraction_estimate = 0.0;  // geometric mean of recorded ratios
    bool converged = false;
    int iterations = 0;
};

// Picard iteration xi^{k+1} = S(t) xi_0 + z + J q_N(xi^k) on the grid of
// cfg, with a frozen noise path; stops when the sup difference drops below
// tol. Not converging within max_iter yields converged = false (horizon too
// large for this N).
PicardResult picard_solve(const RunConfig& cfg, double tol, int max_iter);

struct AprioriReport {
    double sup_beta_p = 0.0;  // sup_t ||beta_N||_{L^p}^p with beta_N = xi_N - z
    double xi0_p = 0.0;       // ||xi_0||_{L^p}^p
    double sup_z_sq = 0.0;    // sup_t ||z||_{L^p}^2
    double sup_z_2p = 0.0;    // sup_t ||z||_{L^p}^{2p}
    double c1 = 0.0;          // C_p T sup||z||^{2p}
    double c2 = 0.0;          // C_p T (1 + sup||z||^2)
    double bound = 0.0;       // (xi0_p + c1) e^{c2}
    double ratio = 0.0;       // sup_beta_p / bound
    bool violated = false;
};

AprioriReport apriori_monitor(const Trajectory& traj, const RunConfig& cfg,
                              double c_p);

// Smallest C_p for which every report in the batch satisfies the bound.
double fit_apriori_constant(const std::vector<AprioriReport>& raw, double T);

}  // namespace vort
