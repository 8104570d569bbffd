#pragma once

// Periodic heat kernel on the torus in both representations, the heat
// semigroup, L^beta space integrals of g and grad g, and the Duhamel
// gradient-convolution operator J.

#include <vector>

#include "vort2d/spectral.hpp"

namespace vort {

struct Point2 {
    double x1 = 0.0;
    double x2 = 0.0;
};

struct KernelEvalSpec {
    double t = 0.1;        // time, > 0
    int image_radius = 3;  // lattice images with |k_i| <= R
    int fourier_cutoff = 20;  // Fourier modes with |k_i| <= M
};

// Fourier series: g(t,x,y) = (1/4pi^2) sum_k exp(-t|k|^2 + ik.(x-y)).
double eval_fourier(const KernelEvalSpec& spec, Point2 x, Point2 y);

// Method of images: g(t,x,y) = (1/4pi t) sum_k exp(-|x-y+2pi k|^2 / 4t).
double eval_images(const KernelEvalSpec& spec, Point2 x, Point2 y);

// grad_y g via the image representation; grad_x g = -grad_y g.
Point2 eval_grad(const KernelEvalSpec& spec, Point2 x, Point2 y);

// Representation switch: images for t <= 0.5, Fourier above.
double eval(const KernelEvalSpec& spec, Point2 x, Point2 y);

// Heat semigroup S(t): coeff(k) *= exp(-|k|^2 t); requires t >= 0.
SpectralField semigroup_apply(double t, const SpectralField& f);

// int_D |grad_y g(s,x,y)|^beta dy   (gradient = true,  0 < beta < 4/3)
// int_D |g(s,x,y)|^beta dy          (gradient = false, 0 < beta < 2)
//
// Midpoint rule on a quad_n^2 grid in the translated variable z = y - x,
// so the value is x-independent by construction (g(t,x,y) = g(t,0,x-y)).
double kernel_lp_integral(double beta, double s, bool gradient, int quad_n = 512);

// Same integrals with the quadrature grid absolute in y (midpoint nodes
// independent of x), so the returned value genuinely varies with the
// evaluation point up to quadrature error. Used to verify x-uniformity.
double kernel_lp_integral_at(double beta, double s, bool gradient, Point2 x,
                             int quad_n = 512);

// Least-squares slope of log integral vs log s over a log-spaced ladder.
struct SlopeFit {
    double slope = 0.0;
    double target = 0.0;
    std::vector<double> s_values;
    std::vector<double> integrals;
};
SlopeFit kernel_integral_slope(double beta, bool gradient, double s_min,
                               double s_max, int points, int quad_n = 512);

// (J phi)(t) = int_0^t int_D grad_y g(t-s,x,y) . phi(s,y) dy ds, evaluated
// spectrally: integrating by parts on the torus, each Fourier mode obeys
//   Jhat(t,k) = -int_0^t e^{-|k|^2 (t-s)} i k.phihat(s,k) ds,
// discretized by left-endpoint slices with exact exponential weights
// (1 - e^{-|k|^2 dt})/|k|^2.
//
// phi[m] is the slice value at s = m*dt; slices 0..steps-1 cover [0, t]
// with t = steps*dt.
SpectralField apply_J_spectral(const std::vector<VectorSpectralField>& phi,
                               double dt, int steps);
GridField apply_J(const std::vector<VectorSpectralField>& phi, double dt,
                  int steps, int grid_n);

}  // namespace vort
