#pragma once

// Biot-Savart velocity reconstruction, the advection nonlinearity
// q(xi) = xi (k * xi), and its C^1-truncated variants.

#include <cstdint>

#include "vort2d/spectral.hpp"

namespace vort {

struct TruncationSpec {
    double level = 1.0e6;  // N >= 1
    double p = 6.0;        // L^p index of the cutoff norm, > 2
};

// v_hat(k) = -i (k_perp / |k|^2) xi_hat(k); divergence-free in multiplier
// arithmetic: k . v_hat(k) = 0 exactly.
VectorSpectralField velocity(const SpectralField& xi);

// C^1 cutoff Theta_N: 1 on [0,N), 0 on [N+1,inf), cubic smoothstep blend
// 1 - 3u^2 + 2u^3 (u = s - N) in between; |Theta'| <= 3/2 <= 2.
double theta(double s, const TruncationSpec& spec);
double theta_prime(double s, const TruncationSpec& spec);

// q(xi) = xi . (k * xi): dealiased pseudo-spectral product, velocity from
// the Fourier multiplier. grid_n = 0 picks the smallest admissible
// power-of-two grid.
VectorSpectralField q(const SpectralField& xi, int grid_n = 0);

// q_N(xi) = q(xi) Theta_N(||xi||_{L^p}),  q~_N(xi) = q(xi) Theta'_N(||xi||_{L^p}).
VectorSpectralField q_truncated(const SpectralField& xi, const TruncationSpec& spec,
                                int grid_n = 0);
VectorSpectralField q_tilde(const SpectralField& xi, const TruncationSpec& spec,
                            int grid_n = 0);

double lp_norm_of(const SpectralField& xi, double p, int grid_n = 0);

// Max observed ratio ||q_N(xi)-q_N(eta)||_{L_p} / ||xi-eta||_{L^p} over
// random pairs with norms sweeping [0, 2(N+1)]; pairs with xi == eta are
// skipped.
double lipschitz_probe(const TruncationSpec& spec, int trials, std::uint64_t seed,
                       int cutoff, int grid_n = 0);

// Random band-limited Hermitian field; coefficient magnitudes fall off as
// |k|^{-decay}.
SpectralField random_spectral_field(int cutoff, std::uint64_t seed, double decay = 1.0);

}  // namespace vort
