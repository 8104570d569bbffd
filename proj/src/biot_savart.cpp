#include "vort2d/biot_savart.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>

#include "vort2d/rng.hpp"

namespace vort {

namespace {

int pick_grid(int cutoff, int grid_n) {
    if (grid_n > 0) return grid_n;
    return next_power_of_two(2 * cutoff + 2);
}

// Clears the low `bits` mantissa bits so that integer multiples up to
// 2^bits stay exactly representable.
double clear_low_mantissa(double x, int bits) {
    std::uint64_t u;
    std::memcpy(&u, &x, sizeof(u));
    u &= ~((std::uint64_t(1) << bits) - 1);
    std::memcpy(&x, &u, sizeof(x));
    return x;
}

}  // namespace

VectorSpectralField velocity(const SpectralField& xi) {
    const int K = xi.cutoff();
    // k . v_hat must cancel exactly: v_hat = (k2 w, -k1 w) with a shared
    // w = i xi_hat/|k|^2 whose mantissa is shortened so that the products
    // k1 (k2 w) and k2 (k1 w) are both exact up to |k1 k2| <= K^2.
    int bits = 0;
    while ((1 << bits) < K * K) ++bits;
    VectorSpectralField v{SpectralField(K), SpectralField(K)};
    xi.for_each_mode([&](int k1, int k2, const cplx& c) {
        if (c == cplx(0.0, 0.0)) return;
        const double n2 = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
        const cplx u = c / n2;
        const cplx w(clear_low_mantissa(-u.imag(), bits),
                     clear_low_mantissa(u.real(), bits));
        v.u1.at(k1, k2) = static_cast<double>(k2) * w;
        v.u2.at(k1, k2) = static_cast<double>(-k1) * w;
    });
    return v;
}

double theta(double s, const TruncationSpec& spec) {
    if (s < 0.0) throw std::invalid_argument("theta: requires s >= 0");
    const double N = spec.level;
    if (s < N) return 1.0;
    if (s >= N + 1.0) return 0.0;
    const double u = s - N;
    return 1.0 - 3.0 * u * u + 2.0 * u * u * u;
}

double theta_prime(double s, const TruncationSpec& spec) {
    if (s < 0.0) throw std::invalid_argument("theta_prime: requires s >= 0");
    const double N = spec.level;
    if (s < N || s >= N + 1.0) return 0.0;
    const double u = s - N;
    return -6.0 * u + 6.0 * u * u;
}

double lp_norm_of(const SpectralField& xi, double p, int grid_n) {
    return lp_norm(to_grid(xi, pick_grid(xi.cutoff(), grid_n)), p);
}

VectorSpectralField q(const SpectralField& xi, int grid_n) {
    const int K = xi.cutoff();
    const int n = pick_grid(K, grid_n);
    const SpectralField xid = dealias(xi);
    const VectorSpectralField v = velocity(xid);

    const GridField gxi = to_grid(xid, n);
    const GridField gv1 = to_grid(v.u1, n);
    const GridField gv2 = to_grid(v.u2, n);

    GridField p1(n), p2(n);
    for (std::size_t i = 0; i < gxi.values.size(); ++i) {
        p1.values[i] = gxi.values[i] * gv1.values[i];
        p2.values[i] = gxi.values[i] * gv2.values[i];
    }
    return {dealias(from_grid(p1, K)), dealias(from_grid(p2, K))};
}

VectorSpectralField q_truncated(const SpectralField& xi, const TruncationSpec& spec,
                                int grid_n) {
    const double th = theta(lp_norm_of(xi, spec.p, grid_n), spec);
    VectorSpectralField out = q(xi, grid_n);
    out.u1 *= th;
    out.u2 *= th;
    return out;
}

VectorSpectralField q_tilde(const SpectralField& xi, const TruncationSpec& spec,
                            int grid_n) {
    const double th = theta_prime(lp_norm_of(xi, spec.p, grid_n), spec);
    VectorSpectralField out = q(xi, grid_n);
    out.u1 *= th;
    out.u2 *= th;
    return out;
}

SpectralField random_spectral_field(int cutoff, std::uint64_t seed, double decay) {
    SpectralField f(cutoff);
    std::uint64_t j = 0;
    for (int k1 = -cutoff; k1 <= cutoff; ++k1) {
        for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
            if (!in_positive_half({k1, k2})) continue;
            ++j;
            const double amp =
                std::pow(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2,
                         -0.5 * decay);
            const double re = rng::standard_normal(seed, j, 0, 0xf1e1d);
            const double im = rng::standard_normal(seed, j, 1, 0xf1e1d);
            f.set_pair(k1, k2, cplx(re, im) * (amp / std::sqrt(2.0)));
        }
    }
    return f;
}

double lipschitz_probe(const TruncationSpec& spec, int trials, std::uint64_t seed,
                       int cutoff, int grid_n) {
    if (trials < 1) throw std::invalid_argument("lipschitz_probe: requires trials >= 1");
    const int n = pick_grid(cutoff, grid_n);
    double max_ratio = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t s1 = rng::derive_seed(seed, 2 * trial);
        const std::uint64_t s2 = rng::derive_seed(seed, 2 * trial + 1);
        SpectralField a = random_spectral_field(cutoff, s1);
        SpectralField b = random_spectral_field(cutoff, s2);
        // Rescale so the pair's norms sweep [0, 2(N+1)].
        const double ta = 2.0 * (spec.level + 1.0) *
                          rng::uniform_closed_open(rng::key(seed, trial, 7, 0));
        const double tb = 2.0 * (spec.level + 1.0) *
                          rng::uniform_closed_open(rng::key(seed, trial, 8, 0));
        a *= ta / lp_norm_of(a, spec.p, n);
        b *= tb / lp_norm_of(b, spec.p, n);

        SpectralField diff = a;
        diff -= b;
        const double denom = lp_norm_of(diff, spec.p, n);
        if (denom < 1.0e-14) continue;  // degenerate pair

        const VectorSpectralField qa = q_truncated(a, spec, n);
        const VectorSpectralField qb = q_truncated(b, spec, n);
        GridField d1 = to_grid(qa.u1, n), d2 = to_grid(qa.u2, n);
        const GridField e1 = to_grid(qb.u1, n), e2 = to_grid(qb.u2, n);
        for (std::size_t i = 0; i < d1.values.size(); ++i) {
            d1.values[i] -= e1.values[i];
            d2.values[i] -= e2.values[i];
        }
        // Vector L_p norm: ||(f1,f2)||_p with |f| the Euclidean magnitude.
        double acc = 0.0;
        for (std::size_t i = 0; i < d1.values.size(); ++i) {
            const double m2 = d1.values[i] * d1.values[i] + d2.values[i] * d2.values[i];
            acc += std::pow(m2, 0.5 * spec.p);
        }
        const double h2 = (kTwoPi / n) * (kTwoPi / n);
        const double num = std::pow(h2 * acc, 1.0 / spec.p);
        max_ratio = std::max(max_ratio, num / denom);
    }
    return max_ratio;
}

}  // namespace vort
