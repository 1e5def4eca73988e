#pragma once

#include <string>
#include <vector>

namespace growthsde::acceptance {

struct CriterionResult {
    int id;
    std::string name;
    bool passed;
    std::string details;
};

struct Options {
    bool quick = true;          // documented desk-scale budget
    std::string cli_path;       // binary used for the determinism criterion
    uint64_t seed = 20240915;
};

// Runs every acceptance criterion, printing one pass/fail line each.
// Returns the number of failures.
int run_all(const Options& opts);

std::vector<CriterionResult> run_criteria(const Options& opts);

}  // namespace growthsde::acceptance
