#pragma once

// Malliavin derivative of the discretized solution: a full forward Jacobian
// over the discrete noise basis (one tangent field per noise coordinate),
// the discrete H_T norm, and the nondegeneracy diagnostics.
//
// The tangent for coordinate (j, m) is the exact derivative of the
// exponential-Euler trajectory with respect to the N(0,dt) increment of
// real noise mode j at step m: injected as
//   amplitude * gamma_k |k|^{-b} * (cos/sin basis field)
// at state index m+1 and propagated by the linearized step
//   Y <- S(dt) Y + Phi(dt) P[-div Dq_N(xi)[Y]],
// where Dq_N(xi)[Y] = Theta_N (Y v + xi (k*Y)) + chi(Y) q(xi) and
// chi(Y) = Theta'_N ||xi||^{1-p} <|xi|^{p-2} xi, Y> is the derivative of the
// norm cutoff (zero whenever ||xi||_{L^p} < N).

#include <cstdint>
#include <vector>

#include "vort2d/heat_kernel.hpp"
#include "vort2d/solver.hpp"

namespace vort {

struct NoiseDirection {
    WaveVector k;        // Z^2_+ representative
    bool is_sin = false;  // false: cosine component, true: sine component
    int step = 0;         // increment index m (covers [m dt, (m+1) dt])
};

struct TangentEnsemble {
    std::vector<NoiseDirection> directions;
    std::vector<SpectralField> tangents;  // at time t = t_index * dt
    double dt = 0.0;
    int t_index = 0;
    double t = 0.0;
    double b = 0.0;
    double amplitude = 1.0;
};

// Requires the trajectory recorded with all states; t_index < 0 means the
// final time. Directions enumerate the noise modes of cfg at every step
// m < t_index.
TangentEnsemble propagate_tangents(const Trajectory& traj, const RunConfig& cfg,
                                   int t_index = -1);

// Discrete H_T norm ||D xi(t,x)||^2 = sum_directions dt * tangent(x)^2.
double malliavin_norm(const TangentEnsemble& ens, Point2 x);

// Same restricted to the window (t-eps, t]: directions with m dt >= t-eps.
double malliavin_window_norm(const TangentEnsemble& ens, Point2 x, double eps);

// Heat-flow ("kernel") part of one tangent at (t,x): the closed form the
// tangent reduces to when the nonlinearity is off.
double kernel_tangent_value(const TangentEnsemble& ens, std::size_t dir, Point2 x);

// Per-sample split ||D||^2_window >= 1/2 A_disc - I_disc with
// A_disc = sum_window dt K^2 (K the kernel part) and
// I_disc = sum_window dt (tangent - K)^2; the inequality (a+b)^2 >=
// a^2/2 - b^2 is exact.
struct NondegeneracySplit {
    double window_norm = 0.0;
    double half_a_disc = 0.0;
    double i_disc = 0.0;
    bool inequality_ok = false;
};
NondegeneracySplit nondegeneracy_split(const TangentEnsemble& ens, Point2 x,
                                       double eps);

// Exact truncated kernel-covariance mass on the final window,
//   A(x,eps) = (1/4pi^2) sum_k |k|^{-2b-2} (1 - e^{-2|k|^2 eps}) / 2,
// against the closed lower bound eps / ((2pi)^2 (1 + 2T)); requires
// 0 < eps < t. upper = eps TrQ/(2pi)^2 is finite for b > 1.
struct LowerBoundA {
    double a_eps = 0.0;
    double bound = 0.0;
    double upper = 0.0;
    bool ok = false;
};
LowerBoundA lower_bound_A(const RunConfig& cfg, double eps, double t);

// Left-point Riemann sum of the stochastic-convolution covariance series at
// t = t_index dt over the retained modes: the zero-nonlinearity reference
// for malliavin_norm.
double conv_stoc_riemann_sum(const RunConfig& cfg, int t_index);

// Empirical small-ball frequencies P(||D xi(t,x)||^2 < delta) over an
// ensemble of independent runs at the probe point.
struct SmallBallReport {
    std::vector<double> deltas;
    std::vector<double> freqs;
    double min_norm = 0.0;
    double max_norm = 0.0;
    bool monotone = false;  // freqs nonincreasing as delta decreases
};
SmallBallReport small_ball_probe(const RunConfig& cfg, std::vector<double> deltas,
                                 int samples);

// Mean of ||D||^p_{H(t-eps,t)} per eps over an ensemble, with the log-log
// regression slope (Malliavin window scaling; expected p/2).
struct WindowScalingReport {
    std::vector<double> eps_values;
    std::vector<double> mean_norm_p;
    double slope = 0.0;
};
WindowScalingReport window_scaling_probe(const RunConfig& cfg,
                                         std::vector<double> eps_values,
                                         int samples);

}  // namespace vort
