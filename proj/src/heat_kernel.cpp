#include "vort2d/heat_kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vort {

namespace {

constexpr double kPi = 3.141592653589793238462643;

void require_positive_time(double t, const char* op) {
    if (!(t > 0.0))
        throw std::invalid_argument(std::string(op) + ": requires t > 0");
}

// 1D theta sum: sum_{|m|<=M} e^{-t m^2} cos(m d).
double theta_fourier_1d(double t, double d, int M) {
    double acc = 1.0;
    for (int m = 1; m <= M; ++m) acc += 2.0 * std::exp(-t * m * m) * std::cos(m * d);
    return acc;
}

// 1D image sum: (1/sqrt(4pi t)) sum_{|m|<=R} e^{-(d + 2pi m)^2 / 4t}.
double theta_images_1d(double t, double d, int R) {
    double acc = 0.0;
    for (int m = -R; m <= R; ++m) {
        const double u = d + kTwoPi * m;
        acc += std::exp(-u * u / (4.0 * t));
    }
    return acc / std::sqrt(4.0 * kPi * t);
}

// d/dy of theta_images_1d with d = x - y.
double theta_images_deriv_1d(double t, double d, int R) {
    double acc = 0.0;
    for (int m = -R; m <= R; ++m) {
        const double u = d + kTwoPi * m;
        acc += std::exp(-u * u / (4.0 * t)) * u / (2.0 * t);
    }
    return acc / std::sqrt(4.0 * kPi * t);
}

}  // namespace

double eval_fourier(const KernelEvalSpec& spec, Point2 x, Point2 y) {
    require_positive_time(spec.t, "eval_fourier");
    // The 2D lattice sum factorizes into 1D theta functions.
    const double f1 = theta_fourier_1d(spec.t, x.x1 - y.x1, spec.fourier_cutoff);
    const double f2 = theta_fourier_1d(spec.t, x.x2 - y.x2, spec.fourier_cutoff);
    return f1 * f2 / (kTwoPi * kTwoPi);
}

double eval_images(const KernelEvalSpec& spec, Point2 x, Point2 y) {
    require_positive_time(spec.t, "eval_images");
    return theta_images_1d(spec.t, x.x1 - y.x1, spec.image_radius) *
           theta_images_1d(spec.t, x.x2 - y.x2, spec.image_radius);
}

Point2 eval_grad(const KernelEvalSpec& spec, Point2 x, Point2 y) {
    require_positive_time(spec.t, "eval_grad");
    const double g1 = theta_images_1d(spec.t, x.x1 - y.x1, spec.image_radius);
    const double g2 = theta_images_1d(spec.t, x.x2 - y.x2, spec.image_radius);
    const double d1 = theta_images_deriv_1d(spec.t, x.x1 - y.x1, spec.image_radius);
    const double d2 = theta_images_deriv_1d(spec.t, x.x2 - y.x2, spec.image_radius);
    return {d1 * g2, g1 * d2};
}

double eval(const KernelEvalSpec& spec, Point2 x, Point2 y) {
    return spec.t <= 0.5 ? eval_images(spec, x, y) : eval_fourier(spec, x, y);
}

SpectralField semigroup_apply(double t, const SpectralField& f) {
    if (t < 0.0) throw std::invalid_argument("semigroup_apply: requires t >= 0");
    SpectralField out = f;
    out.transform_modes([&](int k1, int k2, cplx& c) {
        const double lam = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
        c *= std::exp(-lam * t);
    });
    return out;
}

double kernel_lp_integral(double beta, double s, bool gradient, int quad_n) {
    if (!(s > 0.0)) throw std::invalid_argument("kernel_lp_integral: requires s > 0");
    if (gradient) {
        if (!(beta > 0.0 && beta < 4.0 / 3.0))
            throw std::invalid_argument(
                "kernel_lp_integral: gradient estimate requires 0 < beta < 4/3 "
                "(the integral diverges otherwise)");
    } else {
        if (!(beta > 0.0 && beta < 2.0))
            throw std::invalid_argument(
                "kernel_lp_integral: kernel estimate requires 0 < beta < 2 "
                "(the integral diverges otherwise)");
    }

    // Image radius: the nearest off-cell image is at distance >= pi, so the
    // tail beyond R=3 is below e^{-pi^2 R^2 / s} for the s range of interest.
    const int R = 3;
    const double h = kTwoPi / quad_n;

    // 1D tables over the midpoint grid z_i = (i + 1/2) h.
    std::vector<double> g1(quad_n), d1(quad_n);
    for (int i = 0; i < quad_n; ++i) {
        const double z = (i + 0.5) * h;
        g1[i] = theta_images_1d(s, z, R);
        if (gradient) d1[i] = theta_images_deriv_1d(s, z, R);
    }

    double acc = 0.0;
    if (gradient) {
        for (int i = 0; i < quad_n; ++i) {
            for (int j = 0; j < quad_n; ++j) {
                const double gx = d1[i] * g1[j];
                const double gy = g1[i] * d1[j];
                acc += std::pow(gx * gx + gy * gy, 0.5 * beta);
            }
        }
    } else {
        for (int i = 0; i < quad_n; ++i)
            for (int j = 0; j < quad_n; ++j) acc += std::pow(g1[i] * g1[j], beta);
    }
    return acc * h * h;
}

double kernel_lp_integral_at(double beta, double s, bool gradient, Point2 x,
                             int quad_n) {
    if (!(s > 0.0)) throw std::invalid_argument("kernel_lp_integral_at: requires s > 0");
    const int R = 3;
    const double h = kTwoPi / quad_n;
    std::vector<double> g1(quad_n), g2(quad_n), d1(quad_n), d2(quad_n);
    for (int i = 0; i < quad_n; ++i) {
        const double y = (i + 0.5) * h;
        g1[i] = theta_images_1d(s, x.x1 - y, R);
        g2[i] = theta_images_1d(s, x.x2 - y, R);
        if (gradient) {
            d1[i] = theta_images_deriv_1d(s, x.x1 - y, R);
            d2[i] = theta_images_deriv_1d(s, x.x2 - y, R);
        }
    }
    double acc = 0.0;
    if (gradient) {
        for (int i = 0; i < quad_n; ++i)
            for (int j = 0; j < quad_n; ++j) {
                const double gx = d1[i] * g2[j];
                const double gy = g1[i] * d2[j];
                acc += std::pow(gx * gx + gy * gy, 0.5 * beta);
            }
    } else {
        for (int i = 0; i < quad_n; ++i)
            for (int j = 0; j < quad_n; ++j) acc += std::pow(g1[i] * g2[j], beta);
    }
    return acc * h * h;
}

SlopeFit kernel_integral_slope(double beta, bool gradient, double s_min,
                               double s_max, int points, int quad_n) {
    if (points < 2) throw std::invalid_argument("kernel_integral_slope: points >= 2");
    SlopeFit fit;
    fit.target = gradient ? (-1.5 * beta + 1.0) : (1.0 - beta);
    const double ratio = std::log(s_max / s_min) / (points - 1);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < points; ++i) {
        const double s = s_min * std::exp(ratio * i);
        const double v = kernel_lp_integral(beta, s, gradient, quad_n);
        fit.s_values.push_back(s);
        fit.integrals.push_back(v);
        const double lx = std::log(s), ly = std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = points;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return fit;
}

SpectralField apply_J_spectral(const std::vector<VectorSpectralField>& phi,
                               double dt, int steps) {
    if (phi.empty()) throw std::invalid_argument("apply_J: empty slice sequence");
    if (steps < 0 || static_cast<std::size_t>(steps) > phi.size())
        throw std::invalid_argument("apply_J: slice sequence does not cover [0, t]");

    const int K = phi[0].u1.cutoff();
    SpectralField acc(K);
    // Recursive form of the slice sum: J_{m+1} = S(dt) J_m + w_k (-i k.phihat_m).
    for (int m = 0; m < steps; ++m) {
        acc = semigroup_apply(dt, acc);
        const SpectralField& p1 = phi[m].u1;
        const SpectralField& p2 = phi[m].u2;
        acc.transform_modes([&](int k1, int k2, cplx& c) {
            const double lam = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            const double w = -std::expm1(-lam * dt) / lam;  // (1 - e^{-|k|^2 dt})/|k|^2
            const cplx div = cplx(0.0, 1.0) * (static_cast<double>(k1) * p1.at(k1, k2) +
                                               static_cast<double>(k2) * p2.at(k1, k2));
            c += w * (-div);
        });
    }
    return acc;
}

GridField apply_J(const std::vector<VectorSpectralField>& phi, double dt,
                  int steps, int grid_n) {
    return to_grid(apply_J_spectral(phi, dt, steps), grid_n);
}

}  // namespace vort
