#pragma once

// Monte Carlo estimation of the law of xi(t,x): ensembles over independent
// seeded runs, Gaussian kernel density estimation, and empirical
// absolute-continuity diagnostics. The diagnostics are falsifiable proxies,
// not proofs: exact-tie atoms, split-half two-sample consistency, and
// local-mass boundedness.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vort2d/heat_kernel.hpp"
#include "vort2d/solver.hpp"

namespace vort {

struct EnsembleResult {
    std::vector<double> values;  // xi(t,x) across independent runs
    std::uint64_t cfg_hash = 0;
    double t = 0.0;
    Point2 x;
};

// Independent runs with per-sample derived seeds; evaluates xi at the grid
// time nearest t. Requires samples >= 2. Blow-ups propagate with the
// offending sample id in the message.
EnsembleResult ensemble(const RunConfig& cfg, double t, Point2 x, int samples);

struct KdeResult {
    bool degenerate = false;  // zero-variance ensemble: atom report
    double atom_value = 0.0;
    double bandwidth = 0.0;
    std::vector<double> xs;  // 512-point grid on [min-3h, max+3h]
    std::vector<double> ys;
};

// Gaussian KDE; bandwidth <= 0 selects Silverman's rule 1.06 sigma n^{-1/5}.
// Requires >= 100 samples.
KdeResult kde(const EnsembleResult& res, double bandwidth = 0.0);

struct LocalMassRow {
    double h = 0.0;
    double max_density = 0.0;  // max_c P(|xi - c| < h) / (2h)
};

struct Diagnostics {
    int atom_max_multiplicity = 0;
    bool atom_pass = false;
    double ks_stat = 0.0;       // split-half two-sample KS
    double ks_threshold = 0.0;  // level 0.01
    bool ks_pass = false;
    std::vector<LocalMassRow> local_mass;  // h halving ladder
    double local_ratio_max = 0.0;          // max growth per halving
    bool local_pass = false;

    bool all_pass() const { return atom_pass && ks_pass && local_pass; }
};

// Requires >= 1000 samples.
Diagnostics continuity_diagnostics(const EnsembleResult& res);

// --- Kolmogorov-Smirnov utilities ------------------------------------------

// One-sample statistic sup_x |F_n(x) - F(x)|.
double ks_one_sample(std::vector<double> values,
                     const std::function<double(double)>& cdf);
// Two-sample statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
// Asymptotic critical values at level 0.01: c / sqrt(n) resp.
// c sqrt((n+m)/(nm)) with c = 1.628.
double ks_one_sample_threshold(int n, double level = 0.01);
double ks_two_sample_threshold(int n, int m, double level = 0.01);

double gaussian_cdf(double x, double mean, double stddev);

}  // namespace vort
