#pragma once

#include <string>
#include <vector>

/// Oracle checks: each compares the implementation with an independent route (closed form, grid
/// search, bisection, Monte Carlo) at a pinned tolerance.
namespace firmcomp::validation {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

CheckResult check_nash_closed_form();
CheckResult check_monopolist_grid();
CheckResult check_profit_ratio_limits();
CheckResult check_quality_ratio_threshold();
CheckResult check_small_firm_thresholds();
CheckResult check_small_firm_limit();
CheckResult check_farsighted_optimum();
CheckResult check_strategy_ordering();
CheckResult check_monte_carlo();
CheckResult check_efficiency();
CheckResult check_gaussian_acceptance();

/// The acceptance criteria, in order.
std::vector<CheckResult> run_acceptance_suite();

// Module invariants beyond the acceptance criteria.
CheckResult check_scale_invariance();
CheckResult check_label_invariance();
CheckResult check_nash_perturbation();
CheckResult check_simulation_determinism();
CheckResult check_entrant();

std::vector<CheckResult> run_invariant_suite();

/// "PASS name (detail)" / "FAIL name (detail)".
std::string format(const CheckResult& result);

}  // namespace firmcomp::validation
