#include "vort2d/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vort {

std::string artifact_version() { return "vort2d 0.1.0"; }

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_grid_csv(const std::string& path, const GridField& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "n=" << g.n << "\n";
    for (int a = 0; a < g.n; ++a) {
        for (int b = 0; b < g.n; ++b) {
            if (b) out << ",";
            out << fmt_double(g.at(a, b));
        }
        out << "\n";
    }
}

GridField read_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string header;
    std::getline(in, header);
    if (header.rfind("n=", 0) != 0)
        throw std::runtime_error("grid csv: missing n= header in " + path);
    const int n = std::stoi(header.substr(2));
    GridField g(n);
    std::string line;
    for (int a = 0; a < n; ++a) {
        if (!std::getline(in, line))
            throw std::runtime_error("grid csv: truncated file " + path);
        std::stringstream ss(line);
        std::string cell;
        for (int b = 0; b < n; ++b) {
            if (!std::getline(ss, cell, ','))
                throw std::runtime_error("grid csv: short row in " + path);
            g.at(a, b) = std::stod(cell);
        }
    }
    return g;
}

void write_spectral_csv(const std::string& path, const SpectralField& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "k1,k2,re,im\n";
    const int K = f.cutoff();
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2) {
            const cplx c = f.at(k1, k2);
            out << k1 << "," << k2 << "," << fmt_double(c.real()) << ","
                << fmt_double(c.imag()) << "\n";
        }
}

SpectralField read_spectral_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    std::getline(in, line);  // header
    struct Row {
        int k1, k2;
        double re, im;
    };
    std::vector<Row> rows;
    int K = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        Row r{};
        std::getline(ss, cell, ',');
        r.k1 = std::stoi(cell);
        std::getline(ss, cell, ',');
        r.k2 = std::stoi(cell);
        std::getline(ss, cell, ',');
        r.re = std::stod(cell);
        std::getline(ss, cell, ',');
        r.im = std::stod(cell);
        K = std::max({K, std::abs(r.k1), std::abs(r.k2)});
        rows.push_back(r);
    }
    SpectralField f(K);
    for (const Row& r : rows)
        if (r.k1 != 0 || r.k2 != 0) f.at(r.k1, r.k2) = cplx(r.re, r.im);
    return f;
}

std::string config_canonical_string(const RunConfig& cfg) {
    std::ostringstream ss;
    ss << "K=" << cfg.K << ";n=" << cfg.n << ";dt=" << fmt_double(cfg.dt)
       << ";T=" << fmt_double(cfg.T) << ";b=" << fmt_double(cfg.b)
       << ";N=" << fmt_double(cfg.trunc.level) << ";p=" << fmt_double(cfg.trunc.p)
       << ";seed=" << cfg.seed << ";ic=" << cfg.ic
       << ";ic_amplitude=" << fmt_double(cfg.ic_amplitude)
       << ";noise=" << (cfg.noise_enabled ? 1 : 0)
       << ";nonlinearity=" << (cfg.nonlinearity_enabled ? 1 : 0)
       << ";noise_amplitude=" << fmt_double(cfg.noise_amplitude)
       << ";K_w=" << cfg.K_w << ";probe_t=" << fmt_double(cfg.probe_t)
       << ";probe_x1=" << fmt_double(cfg.probe_x1)
       << ";probe_x2=" << fmt_double(cfg.probe_x2)
       << ";mc_samples=" << cfg.mc_samples
       << ";snapshot_every=" << cfg.snapshot_every;
    return ss.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
    return fnv1a(config_canonical_string(cfg));
}

void write_manifest(const std::string& dir, const Manifest& m) {
    std::ofstream out(dir + "/manifest.json");
    if (!out) throw std::runtime_error("cannot open manifest for writing in " + dir);
    char hash[19];
    std::snprintf(hash, sizeof(hash), "0x%016llx",
                  static_cast<unsigned long long>(m.config_hash));
    out << "{\n"
        << "  \"artifact_version\": \"" << m.artifact_version << "\",\n"
        << "  \"subcommand\": \"" << m.subcommand << "\",\n"
        << "  \"config_hash\": \"" << hash << "\",\n"
        << "  \"threads\": " << m.threads << ",\n"
        << "  \"seed\": " << m.seed << ",\n"
        << "  \"wall_clock_utc\": \"" << m.wall_clock_utc << "\"\n"
        << "}\n";
}

}  // namespace vort
