#pragma once

#include <string>
#include <vector>

namespace pisym {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
};

/// The acceptance checks behind `verify-paper` and the acceptance test
/// binary: the fixed example networks plus the randomized property suites.
/// Random suites fan out through the batch lane when `parallel` is set;
/// results are identical either way (per-index seeding).
std::vector<CriterionResult> run_acceptance(bool parallel = true);

}  // namespace pisym
