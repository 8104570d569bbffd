#include "vort2d/cli.hpp"

#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "vort2d/checks.hpp"
#include "vort2d/density.hpp"
#include "vort2d/heat_kernel.hpp"
#include "vort2d/io.hpp"
#include "vort2d/malliavin.hpp"
#include "vort2d/noise.hpp"
#include "vort2d/parallel.hpp"
#include "vort2d/rng.hpp"

namespace vort {

namespace {

namespace fs = std::filesystem;

std::ofstream open_csv(const std::string& dir, const std::string& name) {
    std::ofstream out(dir + "/" + name);
    if (!out) throw std::runtime_error("cannot open " + dir + "/" + name);
    return out;
}

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

int cmd_simulate(const RunConfig& cfg, const std::string& dir) {
    const Trajectory traj = run(cfg);
    auto out = open_csv(dir, "norms.csv");
    out << "t,l2,lp,sigma_hit_flag\n";
    for (std::size_t m = 0; m < traj.states.size(); ++m) {
        const double l2 = std::sqrt(spectral_energy(traj.states[m]));
        const double lp = lp_norm_of(traj.states[m], cfg.trunc.p, cfg.n);
        const bool hit = traj.sigma_hit && traj.times[m] >= *traj.sigma_hit;
        out << fmt_double(traj.times[m]) << "," << fmt_double(l2) << ","
            << fmt_double(lp) << "," << (hit ? 1 : 0) << "\n";
    }
    if (cfg.snapshot_every > 0) {
        for (std::size_t m = 0; m < traj.states.size();
             m += static_cast<std::size_t>(cfg.snapshot_every)) {
            char name[64];
            std::snprintf(name, sizeof(name), "snapshot_%05zu.csv", m);
            write_spectral_csv(dir + "/" + name, traj.states[m]);
        }
    }
    return 0;
}

int cmd_kernel_check(const RunConfig&, const std::string& dir) {
    auto out = open_csv(dir, "kernel_check.csv");
    out << "beta,s,integral,fitted_slope,target_slope,pass\n";
    bool all = true;
    const struct {
        double beta;
        bool gradient;
    } cases[] = {{1.0, true}, {1.2, true}, {1.0, false}, {1.5, false}};
    for (const auto& c : cases) {
        const SlopeFit fit = kernel_integral_slope(c.beta, c.gradient, 1.0e-3, 1.0e-1, 9);
        const bool pass = std::abs(fit.slope - fit.target) <= 0.05;
        all = all && pass;
        for (std::size_t i = 0; i < fit.s_values.size(); ++i)
            out << fmt_double(c.gradient ? c.beta : -c.beta) << ","
                << fmt_double(fit.s_values[i]) << "," << fmt_double(fit.integrals[i])
                << "," << fmt_double(fit.slope) << "," << fmt_double(fit.target) << ","
                << (pass ? 1 : 0) << "\n";
    }
    return all ? 0 : 1;
}

int cmd_convolution_check(const RunConfig& cfg, const std::string& dir) {
    auto out = open_csv(dir, "convolution_check.csv");
    out << "b,t,empirical_var,closed_form,stderr,pass\n";
    const NoiseSpec base = cfg.noise_spec();
    bool all = true;
    for (double frac : {0.1, 0.5, 1.0}) {
        const double t = frac * cfg.T;
        const int steps = std::max(1, static_cast<int>(t / cfg.dt + 0.5));
        NoiseSpec spec = base;
        spec.dt = t / steps;
        std::vector<double> vals(cfg.mc_samples);
        parallel_for(cfg.mc_samples, [&](std::size_t s) {
            NoiseSpec local = spec;
            local.seed = rng::derive_seed(cfg.seed, s);
            const auto z = sample_convolution(local, steps);
            vals[s] = z.back().point_value(cfg.probe_x1, cfg.probe_x2);
        });
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= vals.size();
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        var /= (vals.size() - 1);
        const double cf = convolution_variance(spec, t);
        const double se = cf * std::sqrt(2.0 / (vals.size() - 1.0));
        const bool pass = std::abs(var - cf) <= 3.0 * se;
        all = all && pass;
        out << fmt_double(spec.b) << "," << fmt_double(t) << "," << fmt_double(var)
            << "," << fmt_double(cf) << "," << fmt_double(se) << "," << (pass ? 1 : 0)
            << "\n";
    }
    return all ? 0 : 1;
}

int cmd_picard(const RunConfig& cfg, const std::string& dir) {
    const PicardResult res = picard_solve(cfg, 1.0e-10, 30);
    auto out = open_csv(dir, "picard.csv");
    out << "iter,sup_diff,ratio\n";
    for (std::size_t k = 0; k < res.diffs.size(); ++k)
        out << (k + 1) << "," << fmt_double(res.diffs[k]) << ","
            << (k > 0 ? fmt_double(res.diffs[k] / res.diffs[k - 1]) : std::string(""))
            << "\n";
    std::cout << "picard: " << (res.converged ? "converged" : "NOT CONVERGED")
              << " in " << res.iterations
              << " iterations, contraction estimate " << res.contraction_estimate
              << "\n";
    return res.converged ? 0 : 1;
}

int cmd_malliavin(const RunConfig& cfg, const std::string& dir) {
    validate_run_config(cfg, /*for_malliavin=*/true);
    const int samples = std::max(1, std::min(cfg.mc_samples, 16));
    const int t_index = static_cast<int>(cfg.effective_probe_t() / cfg.dt + 0.5);
    const double t = t_index * cfg.dt;
    const double eps = 0.25 * t;
    const Point2 x{cfg.probe_x1, cfg.probe_x2};

    auto out = open_csv(dir, "malliavin.csv");
    out << "sample_id,t,x1,x2,norm_sq,A_eps,lower_bound,I_split\n";
    std::vector<double> norms(samples);
    std::vector<NondegeneracySplit> splits(samples);
    parallel_for(samples, [&](std::size_t s) {
        RunConfig local = cfg;
        local.seed = rng::derive_seed(cfg.seed, s);
        const Trajectory traj = run(local);
        const TangentEnsemble ens = propagate_tangents(traj, local, t_index);
        norms[s] = malliavin_norm(ens, x);
        splits[s] = nondegeneracy_split(ens, x, eps);
    });
    const LowerBoundA lb = lower_bound_A(cfg, eps, t);
    for (int s = 0; s < samples; ++s)
        out << s << "," << fmt_double(t) << "," << fmt_double(x.x1) << ","
            << fmt_double(x.x2) << "," << fmt_double(norms[s]) << ","
            << fmt_double(lb.a_eps) << "," << fmt_double(lb.bound) << ","
            << fmt_double(splits[s].half_a_disc - splits[s].i_disc) << "\n";

    // Small-ball delta ladder around the observed norms.
    const double lo = *std::min_element(norms.begin(), norms.end());
    const double hi = *std::max_element(norms.begin(), norms.end());
    SmallBallReport rep;
    rep.deltas = {0.5 * lo, lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo), 2.0 * hi};
    rep.min_norm = lo;
    rep.max_norm = hi;
    for (double d : rep.deltas) {
        int cnt = 0;
        for (double nv : norms)
            if (nv < d) ++cnt;
        rep.freqs.push_back(static_cast<double>(cnt) / samples);
    }
    auto ladder = open_csv(dir, "small_ball.csv");
    ladder << "delta,freq\n";
    for (std::size_t i = 0; i < rep.deltas.size(); ++i)
        ladder << fmt_double(rep.deltas[i]) << "," << fmt_double(rep.freqs[i]) << "\n";
    return 0;
}

int cmd_density(const RunConfig& cfg, const std::string& dir) {
    const Point2 x{cfg.probe_x1, cfg.probe_x2};
    const EnsembleResult res = ensemble(cfg, cfg.effective_probe_t(), x, cfg.mc_samples);

    auto samples = open_csv(dir, "samples.csv");
    samples << "sample_id,value\n";
    for (std::size_t s = 0; s < res.values.size(); ++s)
        samples << s << "," << fmt_double(res.values[s]) << "\n";

    const KdeResult k = kde(res);
    auto kcsv = open_csv(dir, "kde.csv");
    kcsv << "x,density\n";
    if (!k.degenerate)
        for (std::size_t i = 0; i < k.xs.size(); ++i)
            kcsv << fmt_double(k.xs[i]) << "," << fmt_double(k.ys[i]) << "\n";

    const Diagnostics d = continuity_diagnostics(res);
    std::ofstream dj(dir + "/diagnostics.json");
    dj << "{\n  \"proxies_not_proofs\": true,\n"
       << "  \"atom_max_multiplicity\": " << d.atom_max_multiplicity << ",\n"
       << "  \"atom_pass\": " << (d.atom_pass ? "true" : "false") << ",\n"
       << "  \"ks_stat\": " << fmt_double(d.ks_stat) << ",\n"
       << "  \"ks_threshold\": " << fmt_double(d.ks_threshold) << ",\n"
       << "  \"ks_pass\": " << (d.ks_pass ? "true" : "false") << ",\n"
       << "  \"kde_degenerate_atom\": " << (k.degenerate ? "true" : "false") << ",\n"
       << "  \"local_mass_table\": [";
    for (std::size_t i = 0; i < d.local_mass.size(); ++i)
        dj << (i ? ", " : "") << "{\"h\": " << fmt_double(d.local_mass[i].h)
           << ", \"max_density\": " << fmt_double(d.local_mass[i].max_density) << "}";
    dj << "],\n  \"local_ratio_max\": " << fmt_double(d.local_ratio_max) << ",\n"
       << "  \"local_pass\": " << (d.local_pass ? "true" : "false") << "\n}\n";
    return d.all_pass() ? 0 : 1;
}

int cmd_all_checks(const RunConfig&, const std::string& dir) {
    const std::vector<CheckResult> results = run_all_checks();
    auto out = open_csv(dir, "summary.csv");
    out << "id,name,pass,detail\n";
    bool all = true;
    for (const auto& r : results) {
        out << r.id << "," << r.name << "," << (r.pass ? 1 : 0) << ",\"" << r.detail
            << "\"\n";
        std::cout << "[" << (r.pass ? "PASS" : "FAIL") << "] " << r.id << " " << r.name
                  << ": " << r.detail << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "all checks passed" : "CHECK FAILURES PRESENT") << "\n";
    return all ? 0 : 1;
}

}  // namespace

bool known_subcommand(const std::string& name) {
    return name == "simulate" || name == "kernel-check" || name == "convolution-check" ||
           name == "picard" || name == "malliavin" || name == "density" ||
           name == "all-checks";
}

int dispatch(const std::string& subcommand, const RunConfig& cfg,
             const std::string& out_dir) {
    if (!known_subcommand(subcommand))
        throw std::invalid_argument("unknown subcommand \"" + subcommand + "\"");
    validate_run_config(cfg, subcommand == "malliavin");
    fs::create_directories(out_dir);

    Manifest m;
    m.artifact_version = artifact_version();
    m.subcommand = subcommand;
    m.config_hash = config_hash(cfg);
    m.threads = default_threads();
    m.seed = cfg.seed;
    m.wall_clock_utc = utc_now();
    write_manifest(out_dir, m);

    if (subcommand == "simulate") return cmd_simulate(cfg, out_dir);
    if (subcommand == "kernel-check") return cmd_kernel_check(cfg, out_dir);
    if (subcommand == "convolution-check") return cmd_convolution_check(cfg, out_dir);
    if (subcommand == "picard") return cmd_picard(cfg, out_dir);
    if (subcommand == "malliavin") return cmd_malliavin(cfg, out_dir);
    if (subcommand == "density") return cmd_density(cfg, out_dir);
    return cmd_all_checks(cfg, out_dir);
}

}  // namespace vort
