#pragma once

// The acceptance suite: one entry per criterion, each returning a pass flag
// and a measured-vs-threshold detail line. Shared by the `all-checks` CLI
// subcommand and the acceptance test binary.

#include <string>
#include <vector>

namespace vort {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

CheckResult check_kernel_duality();           // 1
CheckResult check_kernel_estimates();         // 2
CheckResult check_convolution_covariance();   // 3
CheckResult check_biot_savart_exactness();    // 4
CheckResult check_advection_neutrality();     // 5
CheckResult check_picard_contraction();       // 6
CheckResult check_apriori_bound();            // 7
CheckResult check_malliavin_oracle();         // 8
CheckResult check_malliavin_zero_nonlin();    // 9
CheckResult check_nondegeneracy();            // 10
CheckResult check_density_diagnostics();      // 11
CheckResult check_determinism();              // 12

std::vector<CheckResult> run_all_checks();

}  // namespace vort
