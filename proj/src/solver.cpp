#include "vort2d/solver.hpp"

#include <cmath>

#include "vort2d/heat_kernel.hpp"
#include "vort2d/rng.hpp"

namespace vort {

namespace {

constexpr double kPi = 3.141592653589793238462643;
constexpr double kBlowUpThreshold = 1.0e12;

// div q as a spectral field: i k . q_hat(k).
SpectralField divergence(const VectorSpectralField& q) {
    SpectralField out(q.u1.cutoff());
    out.transform_modes([&](int k1, int k2, cplx& c) {
        c = cplx(0.0, 1.0) * (static_cast<double>(k1) * q.u1.at(k1, k2) +
                              static_cast<double>(k2) * q.u2.at(k1, k2));
    });
    return out;
}

// Precomputed mode tables for the exponential-Euler update; both the
// single-step op and the run loop go through advance() so they agree
// bit for bit.
struct StepCore {
    const RunConfig& cfg;
    std::vector<double> decay;  // e^{-|k|^2 dt}
    std::vector<double> phi;    // (1 - e^{-|k|^2 dt}) / |k|^2

    explicit StepCore(const RunConfig& c) : cfg(c) {
        const int K = cfg.K;
        const int side = 2 * K + 1;
        decay.assign(static_cast<std::size_t>(side) * side, 1.0);
        phi.assign(decay.size(), 0.0);
        for (int k1 = -K; k1 <= K; ++k1)
            for (int k2 = -K; k2 <= K; ++k2) {
                const double lam =
                    static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
                const std::size_t i = static_cast<std::size_t>(k1 + K) * side + (k2 + K);
                decay[i] = std::exp(-lam * cfg.dt);
                if (k1 || k2) phi[i] = -std::expm1(-lam * cfg.dt) / lam;
            }
    }

    SpectralField advance(const SpectralField& xi, const SpectralField& dz,
                          double theta_val) const {
        SpectralField out = xi;
        auto& raw = out.raw();
        for (std::size_t i = 0; i < raw.size(); ++i) raw[i] *= decay[i];
        if (cfg.nonlinearity_enabled && theta_val != 0.0) {
            const SpectralField div = divergence(q(xi, cfg.n));
            const auto& draw = div.raw();
            for (std::size_t i = 0; i < raw.size(); ++i)
                raw[i] -= phi[i] * (theta_val * draw[i]);
        }
        const auto& zraw = dz.raw();
        for (std::size_t i = 0; i < raw.size(); ++i) raw[i] += zraw[i];
        return out;
    }
};

// Cheap upper bound: ||xi||_{L^p} <= ||xi||_inf (4pi^2)^{1/p} and
// ||xi||_inf <= sum_k |coeff| / 2pi. Lets runs far from the truncation
// threshold skip the exact norm.
double lp_upper_bound(const SpectralField& xi, double p) {
    double sum = 0.0;
    for (const cplx& c : xi.raw()) sum += std::abs(c);
    return sum / kTwoPi * std::pow(4.0 * kPi * kPi, 1.0 / p);
}

}  // namespace

void validate_run_config(const RunConfig& cfg, bool for_malliavin) {
    if (cfg.K < 1) throw std::invalid_argument("config: requires K >= 1");
    if (cfg.n < 2 * cfg.K + 2)
        throw std::invalid_argument("config: requires n >= 2K + 2 (no aliasing of represented modes)");
    if (!is_power_of_two(cfg.n))
        throw std::invalid_argument("config: requires n to be a power of two (transform backend)");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("config: requires dt > 0");
    if (!(cfg.T >= cfg.dt)) throw std::invalid_argument("config: requires T >= dt");
    if (!(cfg.b > 0.0))
        throw std::invalid_argument(
            "config: requires b > 0 (the stochastic convolution converges iff b > 0)");
    if (!(cfg.trunc.level >= 1.0))
        throw std::invalid_argument("config: requires truncation level N >= 1");
    if (!(cfg.trunc.p > 2.0))
        throw std::invalid_argument("config: requires p > 2");
    if (for_malliavin && !(cfg.trunc.p > 4.0))
        throw std::invalid_argument(
            "config: Malliavin operations require p > 4 (differentiability threshold)");
    if (cfg.noise_cutoff() > cfg.K)
        throw std::invalid_argument("config: requires noise cutoff K_w <= K");
    if (cfg.ic != "zero" && cfg.ic != "sin_x1" && cfg.ic != "mix" && cfg.ic != "random")
        throw std::invalid_argument("config: unknown ic \"" + cfg.ic +
                                    "\" (zero | sin_x1 | mix | random)");
    const double pt = cfg.effective_probe_t();
    if (pt > cfg.T) throw std::invalid_argument("config: requires probe_t <= T");
}

SpectralField make_initial_condition(const RunConfig& cfg) {
    SpectralField f(cfg.K);
    const double a = cfg.ic_amplitude;
    if (cfg.ic == "zero") {
        return f;
    } else if (cfg.ic == "sin_x1") {
        f.set_pair(1, 0, cplx(0.0, -kPi * a));
    } else if (cfg.ic == "mix") {
        // sin(x1) + cos(2 x2)
        f.set_pair(1, 0, cplx(0.0, -kPi * a));
        f.set_pair(0, 2, cplx(kPi * a, 0.0));
    } else if (cfg.ic == "random") {
        f = random_spectral_field(cfg.K, rng::mix64(cfg.seed ^ 0x1c0ULL), 1.5);
        f *= a;
    } else {
        throw std::invalid_argument("config: unknown ic \"" + cfg.ic + "\"");
    }
    return f;
}

SpectralField step(const SpectralField& xi, const SpectralField& dz,
                   const RunConfig& cfg) {
    const StepCore core(cfg);
    const double th = cfg.nonlinearity_enabled
                          ? theta(lp_norm_of(xi, cfg.trunc.p, cfg.n), cfg.trunc)
                          : 1.0;
    return core.advance(xi, dz, th);
}

Trajectory run_with_path(const RunConfig& cfg, const NoisePath& path) {
    validate_run_config(cfg);
    const int steps = cfg.steps();
    const NoiseSpec nspec = cfg.noise_spec();
    const NoiseShaper shaper(nspec, path);
    const StepCore core(cfg);

    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.z_states.reserve(steps + 1);

    traj.times.push_back(0.0);
    traj.states.push_back(make_initial_condition(cfg));
    traj.z_states.emplace_back(cfg.K);

    // Exact L^p norm only when the coefficient bound cannot rule out a
    // threshold crossing; below the bound Theta_N = 1 and sigma_N is not hit.
    auto norm_if_near = [&](const SpectralField& xi) {
        if (lp_upper_bound(xi, cfg.trunc.p) < cfg.trunc.level) return -1.0;
        return lp_norm_of(xi, cfg.trunc.p, cfg.n);
    };

    double norm0 = norm_if_near(traj.states[0]);
    if (norm0 >= cfg.trunc.level) traj.sigma_hit = 0.0;

    for (int m = 0; m < steps; ++m) {
        const SpectralField& cur = traj.states.back();
        const double norm = (m == 0) ? norm0 : norm_if_near(cur);
        const double th = norm < 0.0 ? 1.0 : theta(norm, cfg.trunc);

        SpectralField dz(cfg.K);
        shaper.add_increment(dz, path, m);
        SpectralField next = core.advance(cur, dz, th);

        SpectralField znext = traj.z_states.back();
        auto& zraw = znext.raw();
        for (std::size_t i = 0; i < zraw.size(); ++i) zraw[i] *= core.decay[i];
        shaper.add_increment(znext, path, m);

        const double t = (m + 1) * cfg.dt;
        const double energy = spectral_energy(next);
        if (!std::isfinite(energy) || std::sqrt(energy) > kBlowUpThreshold)
            throw BlowUpError(t);

        if (!traj.sigma_hit) {
            const double nnext = norm_if_near(next);
            if (nnext >= cfg.trunc.level) traj.sigma_hit = t;
            if (m + 1 == steps || true) {
                // cache for the next iteration
            }
            norm0 = nnext;  // reused as "previous step's norm" on m == 0 only
        }

        traj.times.push_back(t);
        traj.states.push_back(std::move(next));
        traj.z_states.push_back(std::move(znext));
    }
    return traj;
}

Trajectory run(const RunConfig& cfg) {
    validate_run_config(cfg);
    return run_with_path(cfg, make_noise_path(cfg.noise_spec(), cfg.steps()));
}

PicardResult picard_solve(const RunConfig& cfg, double tol, int max_iter) {
    validate_run_config(cfg);
    const int steps = cfg.steps();
    const NoiseSpec nspec = cfg.noise_spec();
    const auto z = convolution_path(nspec, make_noise_path(nspec, steps));

    // Fixed ingredients: heat flow of xi_0 and the frozen z path, both on
    // the grid times; z lives on cutoff K.
    const SpectralField xi0 = make_initial_condition(cfg);
    std::vector<SpectralField> base;
    base.reserve(steps + 1);
    for (int i = 0; i <= steps; ++i) base.push_back(semigroup_apply(i * cfg.dt, xi0));
    std::vector<SpectralField> zK;
    zK.reserve(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        SpectralField zi(cfg.K);
        z[i].for_each_mode([&](int k1, int k2, const cplx& c) {
            if (zi.contains(k1, k2)) zi.at(k1, k2) = c;
        });
        zK.push_back(std::move(zi));
    }

    PicardResult res;
    std::vector<SpectralField> cur = base;  // xi^0 = heat flow of xi_0

    for (int iter = 0; iter < max_iter; ++iter) {
        // One sweep of J q_N along the whole mesh (recursive slice sum).
        std::vector<SpectralField> next(steps + 1, SpectralField(cfg.K));
        next[0] = base[0];
        SpectralField jacc(cfg.K);
        for (int i = 0; i < steps; ++i) {
            jacc = semigroup_apply(cfg.dt, jacc);
            if (cfg.nonlinearity_enabled) {
                const SpectralField nl = divergence(q_truncated(cur[i], cfg.trunc, cfg.n));
                jacc.transform_modes([&](int k1, int k2, cplx& c) {
                    const double lam =
                        static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
                    const double w = -std::expm1(-lam * cfg.dt) / lam;
                    c -= w * nl.at(k1, k2);
                });
            }
            next[i + 1] = base[i + 1];
            next[i + 1] += zK[i + 1];
            next[i + 1] += jacc;
        }

        double d = 0.0;
        for (int i = 0; i <= steps; ++i) {
            SpectralField diff = next[i];
            diff -= cur[i];
            d = std::max(d, lp_norm_of(diff, cfg.trunc.p, cfg.n));
        }
        res.diffs.push_back(d);
        cur = std::move(next);
        res.iterations = iter + 1;
        if (d < tol) {
            res.converged = true;
            break;
        }
    }

    for (std::size_t k = 0; k + 1 < res.diffs.size(); ++k)
        if (res.diffs[k] > 0.0) res.ratios.push_back(res.diffs[k + 1] / res.diffs[k]);
    if (!res.ratios.empty()) {
        double lg = 0.0;
        for (double r : res.ratios) lg += std::log(r);
        res.contraction_estimate = std::exp(lg / res.ratios.size());
    }
    res.limit = std::move(cur);
    return res;
}

AprioriReport apriori_monitor(const Trajectory& traj, const RunConfig& cfg,
                              double c_p) {
    AprioriReport rep;
    const double p = cfg.trunc.p;
    rep.xi0_p = std::pow(lp_norm_of(traj.states.at(0), p, cfg.n), p);
    for (std::size_t m = 0; m < traj.states.size(); ++m) {
        SpectralField beta = traj.states[m];
        beta -= traj.z_states[m];
        rep.sup_beta_p = std::max(rep.sup_beta_p, std::pow(lp_norm_of(beta, p, cfg.n), p));
        const double zn = lp_norm_of(traj.z_states[m], p, cfg.n);
        rep.sup_z_sq = std::max(rep.sup_z_sq, zn * zn);
        rep.sup_z_2p = std::max(rep.sup_z_2p, std::pow(zn, 2.0 * p));
    }
    rep.c1 = c_p * cfg.T * rep.sup_z_2p;
    rep.c2 = c_p * cfg.T * (1.0 + rep.sup_z_sq);
    rep.bound = (rep.xi0_p + rep.c1) * std::exp(rep.c2);
    rep.ratio = rep.bound > 0.0 ? rep.sup_beta_p / rep.bound : 0.0;
    rep.violated = rep.sup_beta_p > rep.bound;
    return rep;
}

double fit_apriori_constant(const std::vector<AprioriReport>& raw, double T) {
    auto holds = [&](double c) {
        for (const auto& r : raw) {
            const double bound =
                (r.xi0_p + c * T * r.sup_z_2p) * std::exp(c * T * (1.0 + r.sup_z_sq));
            if (r.sup_beta_p > bound) return false;
        }
        return true;
    };
    double hi = 1.0e-6;
    while (!holds(hi)) {
        hi *= 2.0;
        if (hi > 1.0e12) return hi;  // no finite constant found
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (holds(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace vort
