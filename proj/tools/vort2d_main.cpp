// vort2d command-line driver: config in, CSV/JSON artifacts out.

#include <CLI11.hpp>

#include <iostream>

#include "vort2d/cli.hpp"
#include "vort2d/config.hpp"
#include "vort2d/parallel.hpp"

int main(int argc, char** argv) {
    CLI::App app{"vort2d: 2D stochastic vorticity simulator and verification toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    int threads = 1;
    std::int64_t seed_override = -1;
    app.add_option("--config", config_path, "JSON config file (defaults used if absent)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker thread count");
    app.add_option("--seed", seed_override, "override the config seed");

    for (const char* name : {"simulate", "kernel-check", "convolution-check", "picard",
                             "malliavin", "density", "all-checks"})
        app.add_subcommand(name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2
    }

    try {
        vort::RunConfig cfg;
        if (!config_path.empty()) cfg = vort::parse_config_file(config_path);
        vort::apply_env_overrides(cfg);
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
        vort::set_default_threads(threads);
        vort::validate_run_config(cfg);
        const std::string sub = app.get_subcommands().front()->get_name();
        return vort::dispatch(sub, cfg, out_dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
