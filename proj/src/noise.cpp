#include "vort2d/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vort2d/parallel.hpp"
#include "vort2d/rng.hpp"

namespace vort {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244008444;

void validate(const NoiseSpec& spec) {
    if (!(spec.b > 0.0))
        throw std::invalid_argument(
            "noise: requires b > 0 (the convolution series converges iff b > 0)");
    if (!(spec.dt > 0.0)) throw std::invalid_argument("noise: requires dt > 0");
    if (spec.cutoff < 1) throw std::invalid_argument("noise: requires cutoff >= 1");
}

}  // namespace

std::vector<WaveVector> noise_modes(const NoiseSpec& spec) {
    validate(spec);
    std::vector<WaveVector> modes;
    for (int k1 = 0; k1 <= spec.cutoff; ++k1) {
        for (int k2 = -spec.cutoff; k2 <= spec.cutoff; ++k2) {
            const WaveVector k{k1, k2};
            if (!in_positive_half(k)) continue;
            if (spec.active_modes) {
                const auto& mask = *spec.active_modes;
                if (std::find(mask.begin(), mask.end(), k) == mask.end()) continue;
            }
            modes.push_back(k);
        }
    }
    return modes;
}

NoisePath make_noise_path(const NoiseSpec& spec, int steps) {
    if (steps < 0) throw std::invalid_argument("make_noise_path: steps >= 0");
    NoisePath path;
    path.modes = noise_modes(spec);
    path.dt = spec.dt;
    path.increments.resize(steps);
    const double sd = std::sqrt(spec.dt);
    for (int m = 0; m < steps; ++m) {
        auto& row = path.increments[m];
        row.resize(2 * path.modes.size());
        for (std::size_t j = 0; j < path.modes.size(); ++j) {
            row[2 * j] = sd * rng::standard_normal(spec.seed, j, m, 0);
            row[2 * j + 1] = sd * rng::standard_normal(spec.seed, j, m, 1);
        }
    }
    return path;
}

double ou_gamma(double k_norm2, double dt) {
    return std::sqrt(-std::expm1(-2.0 * k_norm2 * dt) / (2.0 * k_norm2 * dt));
}

SpectralField noise_increment_field(const NoiseSpec& spec, const NoisePath& path,
                                    int step, int field_cutoff) {
    SpectralField inc(field_cutoff);
    if (spec.amplitude == 0.0) return inc;
    const auto& row = path.increments.at(step);
    for (std::size_t j = 0; j < path.modes.size(); ++j) {
        const WaveVector k = path.modes[j];
        if (!inc.contains(k.k1, k.k2)) continue;
        const double n2 = k.norm2();
        const double scale =
            spec.amplitude * std::pow(n2, -0.5 * spec.b) * ou_gamma(n2, path.dt) * kInvSqrt2;
        inc.set_pair(k.k1, k.k2, cplx(row[2 * j], -row[2 * j + 1]) * scale);
    }
    return inc;
}

NoiseShaper::NoiseShaper(const NoiseSpec& spec, const NoisePath& path) {
    scale_.resize(path.modes.size());
    for (std::size_t j = 0; j < path.modes.size(); ++j) {
        const double n2 = path.modes[j].norm2();
        scale_[j] = spec.amplitude * std::pow(n2, -0.5 * spec.b) *
                    ou_gamma(n2, path.dt) * kInvSqrt2;
    }
    if (spec.amplitude == 0.0) std::fill(scale_.begin(), scale_.end(), 0.0);
}

void NoiseShaper::add_increment(SpectralField& target, const NoisePath& path,
                                int step) const {
    const auto& row = path.increments.at(step);
    for (std::size_t j = 0; j < path.modes.size(); ++j) {
        const WaveVector k = path.modes[j];
        if (!target.contains(k.k1, k.k2) || scale_[j] == 0.0) continue;
        const cplx v = cplx(row[2 * j], -row[2 * j + 1]) * scale_[j];
        target.at(k.k1, k.k2) += v;
        target.at(-k.k1, -k.k2) += std::conj(v);
    }
}

std::vector<SpectralField> convolution_path(const NoiseSpec& spec,
                                            const NoisePath& path) {
    validate(spec);
    const int steps = static_cast<int>(path.increments.size());
    const NoiseShaper shaper(spec, path);

    const int K = spec.cutoff;
    const int side = 2 * K + 1;
    std::vector<double> decay(static_cast<std::size_t>(side) * side);
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2) {
            const double n2 = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            decay[static_cast<std::size_t>(k1 + K) * side + (k2 + K)] =
                std::exp(-n2 * path.dt);
        }

    std::vector<SpectralField> z;
    z.reserve(steps + 1);
    z.emplace_back(spec.cutoff);  // z(0) = 0
    for (int m = 0; m < steps; ++m) {
        SpectralField next = z.back();
        auto& raw = next.raw();
        for (std::size_t i = 0; i < raw.size(); ++i) raw[i] *= decay[i];
        shaper.add_increment(next, path, m);
        z.push_back(std::move(next));
    }
    return z;
}

std::vector<SpectralField> sample_convolution(const NoiseSpec& spec, int steps) {
    return convolution_path(spec, make_noise_path(spec, steps));
}

double convolution_variance(const NoiseSpec& spec, double t) {
    validate(spec);
    if (t < 0.0) throw std::invalid_argument("convolution_variance: requires t >= 0");
    if (t == 0.0) return 0.0;
    const double a2 = spec.amplitude * spec.amplitude;
    double acc = 0.0;
    for (const WaveVector& k : noise_modes(spec)) {
        const double n2 = k.norm2();
        // Both k and -k of the Hermitian pair.
        acc += 2.0 * std::pow(n2, -spec.b) * (-std::expm1(-2.0 * n2 * t)) / (2.0 * n2);
    }
    return a2 * acc / (kTwoPi * kTwoPi);
}

TraceResult trace_q(const NoiseSpec& spec, bool require_convergent) {
    validate(spec);
    if (require_convergent && spec.b <= 1.0)
        throw std::invalid_argument(
            "trace_q: untruncated trace requires b > 1 (lattice series diverges)");
    TraceResult res;
    for (int k1 = -spec.cutoff; k1 <= spec.cutoff; ++k1)
        for (int k2 = -spec.cutoff; k2 <= spec.cutoff; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const double n2 = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            res.truncated_sum += std::pow(n2, -spec.b);
        }
    if (spec.b > 1.0) {
        // Integral comparison over |k| > cutoff: 2 pi r^{2-2b}/(2b-2).
        res.tail_bound = kTwoPi * std::pow(static_cast<double>(spec.cutoff), 2.0 - 2.0 * spec.b) /
                         (2.0 * spec.b - 2.0);
    } else {
        res.tail_bound = std::numeric_limits<double>::infinity();
    }
    return res;
}

namespace {

double sup_lp_p_of_path(const NoiseSpec& spec, int steps, double p,
                        std::uint64_t seed, int grid_n, double* max_increment) {
    NoiseSpec local = spec;
    local.seed = seed;
    const auto z = sample_convolution(local, steps);
    double sup = 0.0, max_inc = 0.0;
    GridField prev(grid_n);
    for (std::size_t m = 0; m < z.size(); ++m) {
        const GridField g = to_grid(z[m], grid_n);
        const double norm = lp_norm(g, p);
        sup = std::max(sup, std::pow(norm, p));
        if (m > 0) {
            double inc = 0.0;
            for (std::size_t i = 0; i < g.values.size(); ++i)
                inc = std::max(inc, std::abs(g.values[i] - prev.values[i]));
            max_inc = std::max(max_inc, inc);
        }
        prev = g;
    }
    if (max_increment) *max_increment = max_inc;
    return sup;
}

}  // namespace

PathStatsReport path_statistics(const NoiseSpec& spec, int steps, int samples,
                                double p) {
    validate(spec);
    if (!(p > 2.0)) throw std::invalid_argument("path_statistics: requires p > 2");
    if (samples < 2) throw std::invalid_argument("path_statistics: requires samples >= 2");
    const int grid_n = next_power_of_two(2 * spec.cutoff + 2);

    std::vector<double> sups(samples);
    parallel_for(samples, [&](std::size_t s) {
        sups[s] = sup_lp_p_of_path(spec, steps, p, rng::derive_seed(spec.seed, s),
                                   grid_n, nullptr);
    });

    PathStatsReport rep;
    for (int s = 0; s < samples; ++s) rep.estimate += sups[s];
    rep.estimate /= samples;
    const int half = samples / 2;
    for (int s = 0; s < half; ++s) rep.estimate_half += sups[s];
    rep.estimate_half /= std::max(half, 1);
    rep.rel_half_drift = rep.estimate > 0.0
                             ? std::abs(rep.estimate - rep.estimate_half) / rep.estimate
                             : 0.0;

    // Continuity proxy on one refined path: increments shrink under refinement.
    sup_lp_p_of_path(spec, steps, p, rng::derive_seed(spec.seed, 0), grid_n,
                     &rep.max_increment_coarse);
    NoiseSpec fine = spec;
    fine.dt = spec.dt / 2.0;
    sup_lp_p_of_path(fine, 2 * steps, p, rng::derive_seed(spec.seed, 0), grid_n,
                     &rep.max_increment_fine);
    return rep;
}

}  // namespace vort
