#include "vort2d/malliavin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vort2d/parallel.hpp"
#include "vort2d/rng.hpp"

namespace vort {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244008444;
constexpr double kNormGuard = 1.0e-8;  // below this, Theta' = 0 anyway for N >= 1

// Real noise basis element as a spectral field: cos has coeff 1/sqrt(2) at
// +-k, sin has -i/sqrt(2) at k (Hermitian mirror at -k).
SpectralField real_basis_field(int cutoff, const WaveVector& k, bool is_sin) {
    SpectralField f(cutoff);
    f.set_pair(k.k1, k.k2,
               is_sin ? cplx(0.0, -kInvSqrt2) : cplx(kInvSqrt2, 0.0));
    return f;
}

// Shared per-step data for the linearized step.
struct StepLin {
    GridField gxi;       // dealiased xi on the grid
    GridField gv1, gv2;  // velocity of dealiased xi on the grid
    double theta_val = 1.0;
    bool chi_active = false;
    GridField chi_weight;           // Theta' ||xi||^{1-p} h^2 |g|^{p-2} g (full grid)
    VectorSpectralField q_field;    // q(xi), for the cutoff-derivative term
    std::vector<double> decay;      // e^{-|k|^2 dt} per mode slot
    std::vector<double> phi;        // (1 - e^{-|k|^2 dt}) / |k|^2
};

std::vector<double> build_decay(int K, double dt) {
    const int side = 2 * K + 1;
    std::vector<double> d(static_cast<std::size_t>(side) * side, 1.0);
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2) {
            const double lam = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            d[static_cast<std::size_t>(k1 + K) * side + (k2 + K)] = std::exp(-lam * dt);
        }
    return d;
}

std::vector<double> build_phi(int K, double dt) {
    const int side = 2 * K + 1;
    std::vector<double> w(static_cast<std::size_t>(side) * side, 0.0);
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const double lam = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
            w[static_cast<std::size_t>(k1 + K) * side + (k2 + K)] =
                -std::expm1(-lam * dt) / lam;
        }
    return w;
}

// Y <- decay .* Y + phi .* (-div F), with F = Dq_N(xi)[Y] assembled on the
// grid from the shared step data.
void linearized_step(SpectralField& y, const StepLin& lin, const RunConfig& cfg) {
    const int K = cfg.K;
    SpectralField div_forcing(K);
    bool have_forcing = false;

    if (cfg.nonlinearity_enabled && lin.theta_val != 0.0) {
        double chi = 0.0;
        if (lin.chi_active) {
            // chi(Y) = sum_i weight_i (G Y)_i on the full (non-dealiased) grid.
            const GridField gy_full = to_grid(y, cfg.n);
            for (std::size_t i = 0; i < gy_full.values.size(); ++i)
                chi += lin.chi_weight.values[i] * gy_full.values[i];
        }

        const SpectralField yd = dealias(y);
        const VectorSpectralField vy = velocity(yd);
        const GridField gy = to_grid(yd, cfg.n);
        const GridField gvy1 = to_grid(vy.u1, cfg.n);
        const GridField gvy2 = to_grid(vy.u2, cfg.n);
        GridField p1(cfg.n), p2(cfg.n);
        for (std::size_t i = 0; i < gy.values.size(); ++i) {
            p1.values[i] = gy.values[i] * lin.gv1.values[i] + lin.gxi.values[i] * gvy1.values[i];
            p2.values[i] = gy.values[i] * lin.gv2.values[i] + lin.gxi.values[i] * gvy2.values[i];
        }
        const VectorSpectralField dq{dealias(from_grid(p1, K)), dealias(from_grid(p2, K))};

        div_forcing.transform_modes([&](int k1, int k2, cplx& c) {
            cplx q1 = lin.theta_val * dq.u1.at(k1, k2);
            cplx q2 = lin.theta_val * dq.u2.at(k1, k2);
            if (chi != 0.0) {
                q1 += chi * lin.q_field.u1.at(k1, k2);
                q2 += chi * lin.q_field.u2.at(k1, k2);
            }
            c = cplx(0.0, 1.0) *
                (static_cast<double>(k1) * q1 + static_cast<double>(k2) * q2);
        });
        have_forcing = true;
    }

    auto& raw = y.raw();
    if (have_forcing) {
        const auto& fraw = div_forcing.raw();
        for (std::size_t i = 0; i < raw.size(); ++i)
            raw[i] = lin.decay[i] * raw[i] - lin.phi[i] * fraw[i];
    } else {
        for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = lin.decay[i] * raw[i];
    }
}

}  // namespace

TangentEnsemble propagate_tangents(const Trajectory& traj, const RunConfig& cfg,
                                   int t_index) {
    validate_run_config(cfg, /*for_malliavin=*/true);
    if (traj.states.empty())
        throw std::invalid_argument("propagate_tangents: trajectory has no stored states");
    const int M = t_index < 0 ? static_cast<int>(traj.states.size()) - 1 : t_index;
    if (M < 0 || M >= static_cast<int>(traj.states.size()))
        throw std::invalid_argument("propagate_tangents: t_index out of range");

    const double dt = cfg.dt;
    const NoiseSpec nspec = cfg.noise_spec();
    const std::vector<WaveVector> modes = noise_modes(nspec);

    TangentEnsemble ens;
    ens.dt = dt;
    ens.t_index = M;
    ens.t = M * dt;
    ens.b = cfg.b;
    ens.amplitude = nspec.amplitude;

    for (int m = 0; m < M; ++m)
        for (const WaveVector& k : modes) {
            ens.directions.push_back({k, false, m});
            ens.directions.push_back({k, true, m});
        }
    ens.tangents.assign(ens.directions.size(), SpectralField());

    // Shared per-step linearization data.
    std::vector<StepLin> lin(M);
    const std::vector<double> decay = build_decay(cfg.K, dt);
    const std::vector<double> phi = build_phi(cfg.K, dt);
    for (int s = 0; s < M; ++s) {
        StepLin& L = lin[s];
        L.decay = decay;
        L.phi = phi;
        if (!cfg.nonlinearity_enabled) continue;
        const SpectralField& xi = traj.states[s];
        const SpectralField xid = dealias(xi);
        const VectorSpectralField v = velocity(xid);
        L.gxi = to_grid(xid, cfg.n);
        L.gv1 = to_grid(v.u1, cfg.n);
        L.gv2 = to_grid(v.u2, cfg.n);
        const GridField gfull = to_grid(xi, cfg.n);
        const double norm = lp_norm(gfull, cfg.trunc.p);
        L.theta_val = theta(norm, cfg.trunc);
        const double tp = theta_prime(norm, cfg.trunc);
        L.chi_active = (tp != 0.0) && (norm >= kNormGuard);
        if (L.chi_active) {
            L.q_field = q(xi, cfg.n);
            const double h2 = (kTwoPi / cfg.n) * (kTwoPi / cfg.n);
            const double scale = tp * std::pow(norm, 1.0 - cfg.trunc.p) * h2;
            L.chi_weight = GridField(cfg.n);
            for (std::size_t i = 0; i < gfull.values.size(); ++i) {
                const double g = gfull.values[i];
                L.chi_weight.values[i] =
                    scale * std::pow(std::abs(g), cfg.trunc.p - 2.0) * g;
            }
        }
    }

    parallel_for(ens.directions.size(), [&](std::size_t d) {
        const NoiseDirection dir = ens.directions[d];
        const double n2 = dir.k.norm2();
        const double scale =
            ens.amplitude * std::pow(n2, -0.5 * cfg.b) * ou_gamma(n2, dt);
        SpectralField y = real_basis_field(cfg.K, dir.k, dir.is_sin);
        y *= scale;
        for (int s = dir.step + 1; s < M; ++s) linearized_step(y, lin[s], cfg);
        ens.tangents[d] = std::move(y);
    });
    return ens;
}

double malliavin_norm(const TangentEnsemble& ens, Point2 x) {
    double acc = 0.0;
    for (const SpectralField& t : ens.tangents) {
        const double v = t.point_value(x.x1, x.x2);
        acc += v * v;
    }
    return ens.dt * acc;
}

double malliavin_window_norm(const TangentEnsemble& ens, Point2 x, double eps) {
    double acc = 0.0;
    for (std::size_t d = 0; d < ens.directions.size(); ++d) {
        if (ens.directions[d].step * ens.dt < ens.t - eps) continue;
        const double v = ens.tangents[d].point_value(x.x1, x.x2);
        acc += v * v;
    }
    return ens.dt * acc;
}

double kernel_tangent_value(const TangentEnsemble& ens, std::size_t d, Point2 x) {
    const NoiseDirection& dir = ens.directions.at(d);
    const double n2 = dir.k.norm2();
    const double elapsed = (ens.t_index - dir.step - 1) * ens.dt;
    const double ph = dir.k.k1 * x.x1 + dir.k.k2 * x.x2;
    const double basis = (dir.is_sin ? std::sin(ph) : std::cos(ph)) /
                         (std::sqrt(2.0) * 3.141592653589793238462643);
    return ens.amplitude * std::pow(n2, -0.5 * ens.b) * ou_gamma(n2, ens.dt) *
           std::exp(-n2 * elapsed) * basis;
}

NondegeneracySplit nondegeneracy_split(const TangentEnsemble& ens, Point2 x,
                                       double eps) {
    NondegeneracySplit out;
    for (std::size_t d = 0; d < ens.directions.size(); ++d) {
        if (ens.directions[d].step * ens.dt < ens.t - eps) continue;
        const double tv = ens.tangents[d].point_value(x.x1, x.x2);
        const double kv = kernel_tangent_value(ens, d, x);
        out.window_norm += tv * tv;
        out.half_a_disc += 0.5 * kv * kv;
        out.i_disc += (tv - kv) * (tv - kv);
    }
    out.window_norm *= ens.dt;
    out.half_a_disc *= ens.dt;
    out.i_disc *= ens.dt;
    out.inequality_ok = out.window_norm >= out.half_a_disc - out.i_disc - 1.0e-15;
    return out;
}

LowerBoundA lower_bound_A(const RunConfig& cfg, double eps, double t) {
    if (!(eps > 0.0 && eps < t))
        throw std::invalid_argument("lower_bound_A: requires 0 < eps < t");
    LowerBoundA out;
    out.a_eps = convolution_variance(cfg.noise_spec(), eps);
    out.bound = eps / (kTwoPi * kTwoPi * (1.0 + 2.0 * cfg.T));
    if (cfg.b > 1.0)
        out.upper = eps * trace_q(cfg.noise_spec()).truncated_sum / (kTwoPi * kTwoPi);
    out.ok = out.a_eps >= out.bound;
    return out;
}

double conv_stoc_riemann_sum(const RunConfig& cfg, int t_index) {
    const NoiseSpec nspec = cfg.noise_spec();
    const double t = t_index * cfg.dt;
    const double a2 = nspec.amplitude * nspec.amplitude;
    double acc = 0.0;
    for (const WaveVector& k : noise_modes(nspec)) {
        const double n2 = k.norm2();
        double time_sum = 0.0;
        for (int m = 0; m < t_index; ++m)
            time_sum += cfg.dt * std::exp(-2.0 * n2 * (t - m * cfg.dt));
        // cos^2 + sin^2 of the pair: 1/(2 pi^2).
        acc += std::pow(n2, -cfg.b) * time_sum / (2.0 * 9.869604401089358618834491);
    }
    return a2 * acc;
}

SmallBallReport small_ball_probe(const RunConfig& cfg, std::vector<double> deltas,
                                 int samples) {
    validate_run_config(cfg, /*for_malliavin=*/true);
    if (samples < 1) throw std::invalid_argument("small_ball_probe: samples >= 1");
    std::sort(deltas.begin(), deltas.end());
    const int t_index = static_cast<int>(cfg.effective_probe_t() / cfg.dt + 0.5);
    const Point2 x{cfg.probe_x1, cfg.probe_x2};

    std::vector<double> norms(samples);
    parallel_for(samples, [&](std::size_t s) {
        RunConfig local = cfg;
        local.seed = rng::derive_seed(cfg.seed, s);
        const Trajectory traj = run(local);
        const TangentEnsemble ens = propagate_tangents(traj, local, t_index);
        norms[s] = malliavin_norm(ens, x);
    });

    SmallBallReport rep;
    rep.deltas = deltas;
    rep.min_norm = *std::min_element(norms.begin(), norms.end());
    rep.max_norm = *std::max_element(norms.begin(), norms.end());
    for (double d : deltas) {
        int cnt = 0;
        for (double nv : norms)
            if (nv < d) ++cnt;
        rep.freqs.push_back(static_cast<double>(cnt) / samples);
    }
    rep.monotone = std::is_sorted(rep.freqs.begin(), rep.freqs.end());
    return rep;
}

WindowScalingReport window_scaling_probe(const RunConfig& cfg,
                                         std::vector<double> eps_values,
                                         int samples) {
    validate_run_config(cfg, /*for_malliavin=*/true);
    const int t_index = static_cast<int>(cfg.effective_probe_t() / cfg.dt + 0.5);
    const Point2 x{cfg.probe_x1, cfg.probe_x2};
    const double p = cfg.trunc.p;

    std::vector<std::vector<double>> norm_p(eps_values.size(),
                                            std::vector<double>(samples, 0.0));
    parallel_for(samples, [&](std::size_t s) {
        RunConfig local = cfg;
        local.seed = rng::derive_seed(cfg.seed, s);
        const Trajectory traj = run(local);
        const TangentEnsemble ens = propagate_tangents(traj, local, t_index);
        for (std::size_t e = 0; e < eps_values.size(); ++e) {
            const double w = malliavin_window_norm(ens, x, eps_values[e]);
            norm_p[e][s] = std::pow(w, 0.5 * p);  // ||D||^p from ||D||^2
        }
    });

    WindowScalingReport rep;
    rep.eps_values = eps_values;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t e = 0; e < eps_values.size(); ++e) {
        double mean = 0.0;
        for (double v : norm_p[e]) mean += v;
        mean /= samples;
        rep.mean_norm_p.push_back(mean);
        const double lx = std::log(eps_values[e]), ly = std::log(mean);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(eps_values.size());
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return rep;
}

}  // namespace vort
