#pragma once

#include <string>
#include <vector>

namespace isacsim::validation {

struct CheckResult {
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    std::string detail;
};

// Oracle-equivalence checks (exhaustive assignment, numeric fusion minimizer,
// simplex power allocation, Dirichlet-kernel identity, noiseless recovery)
// plus the structural invariant suite. Each check is self-contained and
// deterministic.
CheckResult check_hungarian_oracle();
CheckResult check_fusion_oracle();
CheckResult check_power_allocation_oracle();
CheckResult check_lemma1_identity();
CheckResult check_exact_recovery();
CheckResult check_invariants();

std::vector<CheckResult> run_validation_suite();

}  // namespace isacsim::validation
