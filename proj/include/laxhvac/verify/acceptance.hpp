#pragma once

// Acceptance checks, one function per criterion. Shared by the acceptance
// binary and `laxhvac verify`.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace laxhvac::verify {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    /// Labels of failed sub-checks ("a", "b", ...) for multi-part criteria.
    std::vector<std::string> failed_parts;
};

/// True when `r` matches an expected-failure spec: "4" means the criterion
/// fails; "7b" means it fails and "b" is its only failed part.
bool matches_expected_failure(const CriterionResult& r, const std::string& spec);

struct AcceptanceOptions {
    std::uint64_t seed = 42;
    /// Scenario for the method comparison and determinism runs.
    std::string preset = "single-zone";
    std::vector<std::uint64_t> comparison_seeds{1, 2, 3};
    /// Overrides the preset's training episodes when > 0.
    int episodes = 0;
    /// Progress messages (may be empty).
    std::function<void(const std::string&)> log;
};

std::vector<int> criterion_ids();
CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});

}  // namespace laxhvac::verify
