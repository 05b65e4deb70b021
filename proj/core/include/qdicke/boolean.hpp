#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace qdicke {

/// Fixed-length bit vector; bit j of `bits` is position j.
struct BitString {
    std::uint32_t n = 0;
    std::uint64_t bits = 0;

    int weight() const;
    bool get(std::uint32_t j) const { return (bits >> j) & 1u; }
    static BitString from_string(const std::string& s);  // "0110", position 0 first
};

/// 1 iff |x| == k.
int exact_k(const BitString& x, int k);

/// 1 iff |x| <= k; k = -1 is the constant-0 function.
int threshold_k(const BitString& x, int k);

/// The binary-representation partitions: for i in [0, ceil(log2 n)) and
/// b in {0,1}, S[i][b] = { j in [0,n) : bit i of j == b }. n == 1 returns the
/// single trivial level.
struct PartitionSets {
    std::uint32_t n = 0;
    std::vector<std::array<std::vector<std::uint32_t>, 2>> levels;
};
PartitionSets partition_sets(std::uint32_t n);

/// Evaluates the threshold recurrence as a formula:
///   TH_k(x) = AND_i [ TH_0(x_{S_i,0}) or TH_0(x_{S_i,1})
///                     or OR_{k'=1..k-1} ( TH_{k'}(x_{S_i,0}) and TH_{k-k'}(x_{S_i,1}) ) ]
/// with base case TH_0 = NOR and TH_k = 1 whenever k >= length. Substrings
/// re-index from 0. Agrees with threshold_k on every input.
int threshold_recursion_eval(const BitString& x, int k);

/// One subset of positions, stored as a bitmask over [0, n).
using SubsetMask = std::uint64_t;

/// The randomized EXACT_1 gadget: (AND_{i in S} !x_i) and (OR_{j not in S} x_j).
int gadget_eval(SubsetMask s, const BitString& x);

/// Smallest multiple of 8 that is >= ceil(64 * ln(1/epsilon)).
int choose_t(double epsilon);

/// t independently drawn subsets plus the seed that produced them.
struct SubsetFamily {
    std::uint32_t n = 0;
    int t = 0;
    std::uint64_t seed = 0;
    std::vector<SubsetMask> subsets;
};

/// Draws each position into each subset independently with probability 1/2.
SubsetFamily sample_family(std::uint32_t n, int t, std::uint64_t seed);
SubsetFamily sample_family(std::uint32_t n, int t, std::mt19937_64& rng);

/// 1 iff more than 3t/8 of the gadgets accept x.
int repeated_gadget_decision(const SubsetFamily& family, const BitString& x);

/// Per-input misclassification indicators for a fixed family, plus the error
/// weighted by the |eta_theta> amplitude distribution |beta_x(theta)|^2 with
/// beta_x = cos(theta)^(n-|x|) sin(theta)^|x|.
struct GadgetErrorProfile {
    std::vector<std::uint8_t> delta;  // indexed by x, size 2^n
    double weighted_error = 0.0;
};
GadgetErrorProfile gadget_error_profile(const SubsetFamily& family, double theta);

struct DerandomizedFamily {
    SubsetFamily family;
    double weighted_error = 0.0;  // achieved, not assumed
    int trials = 0;
};

/// Samples `trials` families and returns the one with the smallest weighted
/// error under |eta_theta>. Throws Unsupported for n > 20 (exhaustive x
/// enumeration) and std::invalid_argument for trials < 1.
DerandomizedFamily derandomize_family(std::uint32_t n, int t, double theta, int trials,
                                      std::uint64_t seed);

}  // namespace qdicke
