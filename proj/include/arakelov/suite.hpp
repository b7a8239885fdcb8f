// The verification battery: every inequality and internal consistency
// property the toolkit promises, runnable as one sweep. The CLI `suite`
// subcommand and the acceptance harness both drive these checks.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arakelov/rng.hpp"
#include "arakelov/surface.hpp"

namespace arakelov {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteOptions {
    cd tau{0.0, 1.0};
    std::uint64_t seed = 7;
    bool quick = false;   // reduced sample counts for interactive runs
    int threads = 1;
    std::string cli_path; // enables the CLI byte-reproducibility check
};

// Runs every check; never throws on a failed inequality (failures are
// reported in the results).
std::vector<CheckResult> run_verification_suite(const SuiteOptions& options);

// Individual checks, at the scale used by the full battery unless the
// quick flag trims them.
CheckResult check_theta_symmetries(const SuiteOptions& options);
CheckResult check_cgrho_growth(const SuiteOptions& options);
CheckResult check_theta_upper_bound_sweep(const SuiteOptions& options);
CheckResult check_green_properties(const SuiteOptions& options);
CheckResult check_normalization_consistency(const SuiteOptions& options);
CheckResult check_fay_identity_sweep(const SuiteOptions& options);
CheckResult check_lemma41_sweep(const SuiteOptions& options);
CheckResult check_an_machinery(const SuiteOptions& options);
CheckResult check_an_certification(const SuiteOptions& options);
CheckResult check_theorem1_certification(const SuiteOptions& options);
CheckResult check_merkl_consistency(const SuiteOptions& options);
CheckResult check_cli_reproducibility(const SuiteOptions& options);

// Random period matrix with symmetric real part in [-1/2, 1/2] and a
// positive definite imaginary part with eigenvalues in [0.7, 2]; used by
// the symmetry and bound sweeps.
PeriodMatrix random_period_matrix(int genus, SeededSampler& sampler);

} // namespace arakelov
