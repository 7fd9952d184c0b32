#pragma once

// Checks shared by the acceptance binary and the property unit tests.

#include <cstdint>
#include <string>
#include <vector>

namespace ebeq::checks {

struct Outcome {
    bool passed = false;
    std::string detail;
};

struct SuiteResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::string first_failure;
};

SuiteResult parser_roundtrip(int cases, std::uint64_t seed);
SuiteResult normalize_idempotence(int cases, std::uint64_t seed);
SuiteResult leibniz(int cases, std::uint64_t seed);
SuiteResult derivative_commutation(int cases, std::uint64_t seed);
SuiteResult collect_roundtrip(int cases, std::uint64_t seed);
/// Symbolic total derivatives against Richardson-extrapolated central differences.
SuiteResult finite_differences(int cases, std::uint64_t seed);

Outcome coefficient_reproduction();
Outcome theorem1_y_free();
Outcome theorem2_trace();
Outcome theorem3_symmetries();
Outcome moebius_odes();
Outcome numeric_witnesses(int scenes_per_theorem, std::uint64_t seed);
Outcome group_structure(int draws, std::uint64_t seed);
Outcome property_suites(int cases, std::uint64_t seed);

}  // namespace ebeq::checks
