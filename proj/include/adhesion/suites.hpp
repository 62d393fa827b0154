#pragma once

#include <string>
#include <vector>

namespace adhesion {

/// One acceptance criterion outcome; `detail` carries the measured values.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

// Individual acceptance criteria. Each runs its own pinned configuration and
// tolerance; nothing is deferred to runtime calibration.
CheckResult criterion_mass_conservation();     // 1
CheckResult criterion_nonnegativity();         // 2
CheckResult criterion_interior_equilibrium();  // 3
CheckResult criterion_quadrature_convergence();// 4
CheckResult criterion_oracle_equivalence();    // 5
CheckResult criterion_heat_equation_limit();   // 6
CheckResult criterion_aps_aggregation();       // 7
CheckResult criterion_repulsion_regimes();     // 8
CheckResult criterion_sde_pde_consistency();   // 9
CheckResult criterion_empirical_fields();      // 10
CheckResult criterion_determinism();           // 11

/// Validation suites exposed by the CLI: invariants (1, 2, 3, 11),
/// convergence (4), oracle (5, 6), figures (7, 8, 9, 10).
std::vector<std::string> suite_names();
SuiteReport run_suite(const std::string& name);

} // namespace adhesion
