#pragma once

#include <functional>
#include <string>
#include <vector>

// The acceptance suite: one entry per criterion, each printing a single
// pass/fail line. Shared by the acceptance test binary and `kp2 verify`.

namespace kp2::verify {

struct CriterionResult {
    std::string id;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

using Progress = std::function<void(const CriterionResult&)>;

/// suite: "quick" (criteria 1, 3, 4, 5, 8), "full" (all ten), or a
/// comma-separated list of numbers ("2,7").
std::vector<CriterionResult> run_suite(const std::string& suite, const Progress& progress);

} // namespace kp2::verify
