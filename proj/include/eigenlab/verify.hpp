#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eigenlab::verify {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<Check> checks;
    double seconds = 0.0;
    double budget_seconds = 0.0;

    bool within_budget() const { return seconds <= budget_seconds; }
    bool pass() const;
};

struct Options {
    unsigned workers = 1;
    std::uint64_t seed = 42;
};

/// orders, sampler, spectrum, hall, lemma, level0, level1, m2-examples, rank, weights
const std::vector<std::string>& suite_names();

/// Runs one suite with its tolerances and runtime budget pinned.  Throws
/// std::invalid_argument for an unknown name.
SuiteResult run_suite(const std::string& name, const Options& options = {});

/// Support sizes used by the recursion suites: 12 for q = 2, 8 for q = 3.
int recursion_max_weight(std::uint64_t q);

}  // namespace eigenlab::verify
