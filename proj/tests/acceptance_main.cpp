// Acceptance suite: one run per criterion with pinned configurations and
// tolerances, one pass/fail line each. Exit code is the number of failures.

#include <chrono>
#include <cstdio>
#include <vector>

#include "adhesion/suites.hpp"

int main() {
    using adhesion::CheckResult;
    std::vector<CheckResult (*)()> criteria = {
        adhesion::criterion_mass_conservation,
        adhesion::criterion_nonnegativity,
        adhesion::criterion_interior_equilibrium,
        adhesion::criterion_quadrature_convergence,
        adhesion::criterion_oracle_equivalence,
        adhesion::criterion_heat_equation_limit,
        adhesion::criterion_aps_aggregation,
        adhesion::criterion_repulsion_regimes,
        adhesion::criterion_sde_pde_consistency,
        adhesion::criterion_empirical_fields,
        adhesion::criterion_determinism,
    };

    int failures = 0;
    std::printf("=== acceptance criteria ===\n");
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        const CheckResult result = criterion();
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %s | %s [%.1f s]\n", result.pass ? "PASS" : "FAIL",
                    result.name.c_str(), result.detail.c_str(), seconds);
        std::fflush(stdout);
        if (!result.pass) ++failures;
    }
    if (failures == 0)
        std::printf("=== all %zu criteria passed ===\n", criteria.size());
    else
        std::printf("=== %d of %zu criteria FAILED ===\n", failures, criteria.size());
    return failures;
}
