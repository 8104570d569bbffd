#include "vort2d/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vort2d/io.hpp"

namespace vort {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "K",  "n",  "dt", "T",  "b",  "N",  "p",  "seed", "ic", "ic_amplitude",
    "noise", "nonlinearity", "noise_amplitude", "K_w", "probe_t", "probe_x1",
    "probe_x2", "mc_samples", "snapshot_every"};

void assign_key(RunConfig& cfg, const std::string& key, const json& v) {
    if (key == "K") cfg.K = v.get<int>();
    else if (key == "n") cfg.n = v.get<int>();
    else if (key == "dt") cfg.dt = v.get<double>();
    else if (key == "T") cfg.T = v.get<double>();
    else if (key == "b") cfg.b = v.get<double>();
    else if (key == "N") cfg.trunc.level = v.get<double>();
    else if (key == "p") cfg.trunc.p = v.get<double>();
    else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
    else if (key == "ic") cfg.ic = v.get<std::string>();
    else if (key == "ic_amplitude") cfg.ic_amplitude = v.get<double>();
    else if (key == "noise") cfg.noise_enabled = v.get<bool>();
    else if (key == "nonlinearity") cfg.nonlinearity_enabled = v.get<bool>();
    else if (key == "noise_amplitude") cfg.noise_amplitude = v.get<double>();
    else if (key == "K_w") cfg.K_w = v.get<int>();
    else if (key == "probe_t") cfg.probe_t = v.get<double>();
    else if (key == "probe_x1") cfg.probe_x1 = v.get<double>();
    else if (key == "probe_x2") cfg.probe_x2 = v.get<double>();
    else if (key == "mc_samples") cfg.mc_samples = v.get<int>();
    else if (key == "snapshot_every") cfg.snapshot_every = v.get<int>();
}

json parse_env_value(const std::string& key, const std::string& text) {
    if (key == "ic") return json(text);
    if (key == "noise" || key == "nonlinearity") return json(text == "1" || text == "true");
    return json::parse(text);  // numbers
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

    RunConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (!kKnownKeys.count(key))
            throw std::invalid_argument("config: unknown key \"" + key + "\"");
        try {
            assign_key(cfg, key, value);
        } catch (const json::exception& e) {
            throw std::invalid_argument("config: bad value for \"" + key + "\": " + e.what());
        }
    }
    validate_run_config(cfg);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_env_overrides(RunConfig& cfg) {
    for (const std::string& key : kKnownKeys) {
        std::string env = "VORT2D_";
        for (char c : key) env += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        const char* v = std::getenv(env.c_str());
        if (!v) continue;
        try {
            assign_key(cfg, key, parse_env_value(key, v));
        } catch (const std::exception& e) {
            throw std::invalid_argument("config: bad env override " + env + ": " + e.what());
        }
    }
    validate_run_config(cfg);
}

std::string config_to_json(const RunConfig& cfg) {
    json j;
    j["K"] = cfg.K;
    j["n"] = cfg.n;
    j["dt"] = cfg.dt;
    j["T"] = cfg.T;
    j["b"] = cfg.b;
    j["N"] = cfg.trunc.level;
    j["p"] = cfg.trunc.p;
    j["seed"] = cfg.seed;
    j["ic"] = cfg.ic;
    j["ic_amplitude"] = cfg.ic_amplitude;
    j["noise"] = cfg.noise_enabled;
    j["nonlinearity"] = cfg.nonlinearity_enabled;
    j["noise_amplitude"] = cfg.noise_amplitude;
    j["K_w"] = cfg.K_w;
    j["probe_t"] = cfg.probe_t;
    j["probe_x1"] = cfg.probe_x1;
    j["probe_x2"] = cfg.probe_x2;
    j["mc_samples"] = cfg.mc_samples;
    j["snapshot_every"] = cfg.snapshot_every;
    return j.dump(2);
}

}  // namespace vort
