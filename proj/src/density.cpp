#include "vort2d/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vort2d/io.hpp"
#include "vort2d/parallel.hpp"
#include "vort2d/rng.hpp"

namespace vort {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;

double sample_stddev(const std::vector<double>& v, double* mean_out = nullptr) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    if (mean_out) *mean_out = mean;
    return std::sqrt(acc / (v.size() - 1));
}

}  // namespace

EnsembleResult ensemble(const RunConfig& cfg, double t, Point2 x, int samples) {
    validate_run_config(cfg);
    if (samples < 2) throw std::invalid_argument("ensemble: requires samples >= 2");
    const int t_index = static_cast<int>(t / cfg.dt + 0.5);
    if (t_index < 0 || t_index > cfg.steps())
        throw std::invalid_argument("ensemble: probe time outside [0, T]");

    EnsembleResult res;
    res.values.assign(samples, 0.0);
    res.t = t_index * cfg.dt;
    res.x = x;
    res.cfg_hash = config_hash(cfg);

    std::vector<std::string> errors(samples);
    parallel_for(samples, [&](std::size_t s) {
        RunConfig local = cfg;
        local.seed = rng::derive_seed(cfg.seed, s);
        try {
            const Trajectory traj = run(local);
            res.values[s] = traj.states.at(t_index).point_value(x.x1, x.x2);
        } catch (const BlowUpError& e) {
            errors[s] = e.what();
        }
    });
    for (int s = 0; s < samples; ++s)
        if (!errors[s].empty())
            throw std::runtime_error("ensemble: sample " + std::to_string(s) + ": " +
                                     errors[s]);
    return res;
}

KdeResult kde(const EnsembleResult& res, double bandwidth) {
    const auto& v = res.values;
    if (v.size() < 100) throw std::invalid_argument("kde: requires >= 100 samples");

    KdeResult out;
    const double sigma = sample_stddev(v);
    if (sigma == 0.0) {
        out.degenerate = true;
        out.atom_value = v[0];
        return out;
    }
    out.bandwidth = bandwidth > 0.0
                        ? bandwidth
                        : 1.06 * sigma * std::pow(static_cast<double>(v.size()), -0.2);
    const double h = out.bandwidth;
    const double lo = *std::min_element(v.begin(), v.end()) - 3.0 * h;
    const double hi = *std::max_element(v.begin(), v.end()) + 3.0 * h;
    const int grid = 512;
    out.xs.resize(grid);
    out.ys.resize(grid);
    const double step = (hi - lo) / (grid - 1);
    for (int i = 0; i < grid; ++i) {
        const double xc = lo + i * step;
        double acc = 0.0;
        for (double s : v) {
            const double u = (xc - s) / h;
            acc += std::exp(-0.5 * u * u);
        }
        out.xs[i] = xc;
        out.ys[i] = acc * kInvSqrt2Pi / (h * v.size());
    }
    return out;
}

Diagnostics continuity_diagnostics(const EnsembleResult& res) {
    const auto& v = res.values;
    if (v.size() < 1000)
        throw std::invalid_argument("continuity_diagnostics: requires >= 1000 samples");
    Diagnostics d;

    // (a) Atoms: exact ties among n doubles from a continuous law have
    // birthday-bound probability ~ n^2 2^{-53}, far below 1; any multiplicity
    // above 1 is flagged.
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    int run = 1;
    d.atom_max_multiplicity = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        run = (sorted[i] == sorted[i - 1]) ? run + 1 : 1;
        d.atom_max_multiplicity = std::max(d.atom_max_multiplicity, run);
    }
    d.atom_pass = d.atom_max_multiplicity == 1;

    // (b) Split-half two-sample KS at level 0.01.
    const std::size_t half = v.size() / 2;
    std::vector<double> first(v.begin(), v.begin() + half);
    std::vector<double> second(v.begin() + half, v.end());
    d.ks_stat = ks_two_sample(first, second);
    d.ks_threshold = ks_two_sample_threshold(static_cast<int>(first.size()),
                                             static_cast<int>(second.size()));
    d.ks_pass = d.ks_stat < d.ks_threshold;

    // (c) Local mass: max_c P(|xi - c| < h)/(2h) must stay bounded as h
    // halves (an atom of mass q makes it grow like q/2h, doubling per
    // level). Centers swept over the sorted sample; growth per halving
    // capped at 1.6.
    const double sigma = sample_stddev(v);
    double h = sigma > 0.0 ? 2.0 * sigma * std::pow(static_cast<double>(v.size()), -0.2)
                           : 1.0e-12;
    for (int level = 0; level < 3; ++level) {
        double max_density = 0.0;
        // P(|xi - c| < h) maximized over c: widest window of sorted values.
        std::size_t j = 0;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            while (j < sorted.size() && sorted[j] < sorted[i] + 2.0 * h) ++j;
            max_density = std::max(
                max_density, static_cast<double>(j - i) / (2.0 * h * sorted.size()));
        }
        d.local_mass.push_back({h, max_density});
        h *= 0.5;
    }
    d.local_ratio_max = 0.0;
    for (std::size_t i = 1; i < d.local_mass.size(); ++i)
        d.local_ratio_max = std::max(
            d.local_ratio_max, d.local_mass[i].max_density /
                                   std::max(d.local_mass[i - 1].max_density, 1e-300));
    d.local_pass = d.local_ratio_max <= 1.6;
    return d;
}

double ks_one_sample(std::vector<double> values,
                     const std::function<double(double)>& cdf) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double stat = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double F = cdf(values[i]);
        stat = std::max(stat, std::abs(F - static_cast<double>(i) / n));
        stat = std::max(stat, std::abs(static_cast<double>(i + 1) / n - F));
    }
    return stat;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double stat = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        stat = std::max(stat, std::abs(static_cast<double>(i) / na -
                                       static_cast<double>(j) / nb));
    }
    return stat;
}

namespace {
// Asymptotic Kolmogorov critical value: level 0.01 -> 1.628.
double ks_c(double level) {
    if (std::abs(level - 0.01) > 1e-12)
        throw std::invalid_argument("ks threshold: only level 0.01 is tabulated");
    return 1.628;
}
}  // namespace

double ks_one_sample_threshold(int n, double level) {
    return ks_c(level) / std::sqrt(static_cast<double>(n));
}

double ks_two_sample_threshold(int n, int m, double level) {
    return ks_c(level) * std::sqrt((static_cast<double>(n) + m) /
                                   (static_cast<double>(n) * m));
}

double gaussian_cdf(double x, double mean, double stddev) {
    return 0.5 * std::erfc(-(x - mean) / (stddev * std::sqrt(2.0)));
}

}  // namespace vort
