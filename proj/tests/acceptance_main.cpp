// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <vector>

#include "vort2d/checks.hpp"
#include "vort2d/parallel.hpp"

int main() {
    vort::set_default_threads(vort::default_threads());
    using clock = std::chrono::steady_clock;

    struct Entry {
        const char* name;
        vort::CheckResult (*fn)();
    };
    const std::vector<Entry> entries = {
        {"kernel-duality", vort::check_kernel_duality},
        {"kernel-estimates", vort::check_kernel_estimates},
        {"convolution-covariance", vort::check_convolution_covariance},
        {"biot-savart-exactness", vort::check_biot_savart_exactness},
        {"advection-neutrality", vort::check_advection_neutrality},
        {"picard-contraction", vort::check_picard_contraction},
        {"apriori-bound", vort::check_apriori_bound},
        {"malliavin-oracle", vort::check_malliavin_oracle},
        {"malliavin-zero-nonlinearity", vort::check_malliavin_zero_nonlin},
        {"nondegeneracy", vort::check_nondegeneracy},
        {"density-diagnostics", vort::check_density_diagnostics},
        {"determinism", vort::check_determinism},
    };

    bool all = true;
    for (const Entry& e : entries) {
        const auto t0 = clock::now();
        const vort::CheckResult r = e.fn();
        const double secs =
            std::chrono::duration<double>(clock::now() - t0).count();
        std::printf("[%s] %2d %-28s (%6.1fs) %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), secs, r.detail.c_str());
        std::fflush(stdout);
        all = all && r.pass;
    }
    std::printf(all ? "acceptance: all criteria passed\n"
                    : "acceptance: FAILURES PRESENT\n");
    return all ? 0 : 1;
}
