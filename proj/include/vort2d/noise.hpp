#pragma once

// Q-Wiener noise with covariance Q = (-Delta)^{-b} and the stochastic
// convolution z (linear stochastic heat equation, z(0) = 0).
//
// Real noise basis per k in Z^2_+: a cosine and a sine component. Every
// Fourier mode of z is an Ornstein-Uhlenbeck process
//   dz_k = -|k|^2 z_k dt + |k|^{-b} dbeta_k,
// sampled with the exact discrete transition, so covariance tests carry no
// timestep bias: the complex mode variance after time t is
//   |k|^{-2b} (1 - e^{-2|k|^2 t}) / (2|k|^2).

#include <cstdint>
#include <optional>
#include <vector>

#include "vort2d/spectral.hpp"

namespace vort {

struct NoiseSpec {
    double b = 1.0;          // covariance exponent, > 0
    int cutoff = 21;         // modes retained, |k_i| <= cutoff
    double dt = 0.01;        // timestep, > 0
    std::uint64_t seed = 0;
    double amplitude = 1.0;  // 0 disables the noise entirely
    // When set, only the listed modes (as Z^2_+ representatives) carry noise.
    std::optional<std::vector<WaveVector>> active_modes;
};

// Z^2_+ representatives enumerated deterministically (k1 asc, then k2).
std::vector<WaveVector> noise_modes(const NoiseSpec& spec);

// Per-mode, per-step Gaussian increments, i.i.d. N(0, dt); layout
// increments[step][2*j + c] with c = 0 cosine / 1 sine component of mode j.
// Counter-based generation: same spec and steps give bit-identical values.
struct NoisePath {
    std::vector<WaveVector> modes;
    double dt = 0.0;
    std::vector<std::vector<double>> increments;
};

NoisePath make_noise_path(const NoiseSpec& spec, int steps);

// Exact OU transition factor sqrt((1 - e^{-2|k|^2 dt}) / (2|k|^2 dt)):
// maps an N(0,dt) increment to the exactly-integrated noise contribution.
double ou_gamma(double k_norm2, double dt);

// Spectral field of the shaped noise increment for one step:
//   inc_hat(k) = amplitude |k|^{-b} gamma_k (eta_cos - i eta_sin)/sqrt(2)
// mirrored Hermitian onto -k. Modes beyond field_cutoff are dropped.
SpectralField noise_increment_field(const NoiseSpec& spec, const NoisePath& path,
                                    int step, int field_cutoff);

// Precomputed per-mode shaping constants for tight sampling loops; produces
// the same fields as noise_increment_field.
class NoiseShaper {
  public:
    NoiseShaper(const NoiseSpec& spec, const NoisePath& path);
    void add_increment(SpectralField& target, const NoisePath& path, int step) const;

  private:
    std::vector<double> scale_;
};

// z at grid times 0..steps (z[0] = 0), z_{m+1} = S(dt) z_m + inc_m.
std::vector<SpectralField> convolution_path(const NoiseSpec& spec,
                                            const NoisePath& path);
std::vector<SpectralField> sample_convolution(const NoiseSpec& spec, int steps);

// Closed form Var z(t,x) = (1/4pi^2) sum_k |k|^{-2b}(1-e^{-2|k|^2 t})/(2|k|^2),
// truncated to the retained modes; x-independent.
double convolution_variance(const NoiseSpec& spec, double t);

// Truncated Tr Q = sum_{|k_i|<=cutoff} |k|^{-2b} plus an integral tail bound.
struct TraceResult {
    double truncated_sum = 0.0;
    double tail_bound = 0.0;  // finite only when b > 1
};
// require_convergent = true asks for the untruncated trace and throws for
// b <= 1 where the lattice series diverges.
TraceResult trace_q(const NoiseSpec& spec, bool require_convergent = false);

// Monte Carlo E[sup_t ||z(t)||_{L^p}^p] over [0, steps*dt] plus
// self-consistency and continuity proxies.
struct PathStatsReport {
    double estimate = 0.0;        // all samples
    double estimate_half = 0.0;   // first half of the samples
    double rel_half_drift = 0.0;  // |estimate - estimate_half| / estimate
    double max_increment_coarse = 0.0;  // sup-norm step increment at dt
    double max_increment_fine = 0.0;    // same path statistic at dt/2
};
PathStatsReport path_statistics(const NoiseSpec& spec, int steps, int samples,
                                double p);

}  // namespace vort
