#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdicke/verify.hpp"

namespace qdicke {

/// Grid/tolerance configuration shared by the verification suites. Every
/// tolerance is pinned here or in the suite bodies; nothing is calibrated
/// at run time.
struct SuiteOptions {
    int max_qubits = 24;
    std::uint64_t seed = 20250810;
    int derand_trials = 200;
    double epsilon = 0.5;
    bool verbose = false;
};

// One suite per acceptance criterion, plus the fitted-envelope resource
// report. Each returns fine-grained verdicts; a criterion passes when all
// of its verdicts pass.
std::vector<Verdict> suite_boolean(const SuiteOptions& opt);         // 1
std::vector<Verdict> suite_exact_dicke(const SuiteOptions& opt);     // 2
std::vector<Verdict> suite_depth_flatness(const SuiteOptions& opt);  // 3
std::vector<Verdict> suite_grover_params(const SuiteOptions& opt);   // 4
std::vector<Verdict> suite_w_approx(const SuiteOptions& opt);        // 5
std::vector<Verdict> suite_gadget_stats(const SuiteOptions& opt);    // 6
std::vector<Verdict> suite_qac0f(const SuiteOptions& opt);           // 7
std::vector<Verdict> suite_formula_bounds(const SuiteOptions& opt);  // 8
std::vector<Verdict> suite_resources(const SuiteOptions& opt);       // fitted envelopes

std::vector<std::string> suite_names();
std::vector<Verdict> run_suite(const std::string& name, const SuiteOptions& opt);

}  // namespace qdicke
