#include "qdicke/boolean.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "qdicke/errors.hpp"

namespace qdicke {

int BitString::weight() const { return std::popcount(bits); }

BitString BitString::from_string(const std::string& s) {
    BitString x;
    x.n = static_cast<std::uint32_t>(s.size());
    for (std::uint32_t j = 0; j < x.n; ++j) {
        if (s[j] == '1') x.bits |= std::uint64_t(1) << j;
        else if (s[j] != '0') throw std::invalid_argument("bit string must be 0/1");
    }
    return x;
}

int exact_k(const BitString& x, int k) { return x.weight() == k ? 1 : 0; }

int threshold_k(const BitString& x, int k) {
    if (k < 0) return 0;
    return x.weight() <= k ? 1 : 0;
}

PartitionSets partition_sets(std::uint32_t n) {
    PartitionSets p;
    p.n = n;
    const std::uint32_t levels =
        n <= 2 ? 1 : static_cast<std::uint32_t>(std::ceil(std::log2(double(n))));
    p.levels.resize(levels);
    for (std::uint32_t i = 0; i < levels; ++i) {
        for (std::uint32_t j = 0; j < n; ++j) {
            p.levels[i][(j >> i) & 1u].push_back(j);
        }
    }
    return p;
}

namespace {

// x restricted to `positions`, re-indexed from 0.
BitString substring(const BitString& x, const std::vector<std::uint32_t>& positions) {
    BitString sub;
    sub.n = static_cast<std::uint32_t>(positions.size());
    for (std::uint32_t j = 0; j < sub.n; ++j) {
        if (x.get(positions[j])) sub.bits |= std::uint64_t(1) << j;
    }
    return sub;
}

}  // namespace

int threshold_recursion_eval(const BitString& x, int k) {
    if (k < 0) return 0;
    if (k == 0) return x.bits == 0 ? 1 : 0;  // NOR base case
    if (static_cast<std::uint32_t>(k) >= x.n) return 1;
    const PartitionSets parts = partition_sets(x.n);
    for (const auto& level : parts.levels) {
        const BitString x0 = substring(x, level[0]);
        const BitString x1 = substring(x, level[1]);
        bool clause = threshold_recursion_eval(x0, 0) == 1 || threshold_recursion_eval(x1, 0) == 1;
        for (int kp = 1; kp < k && !clause; ++kp) {
            clause = threshold_recursion_eval(x0, kp) == 1 &&
                     threshold_recursion_eval(x1, k - kp) == 1;
        }
        if (!clause) return 0;
    }
    return 1;
}

int gadget_eval(SubsetMask s, const BitString& x) {
    const std::uint64_t all = x.n >= 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << x.n) - 1);
    const std::uint64_t sbar = all & ~s;
    const bool a_clause = (x.bits & s) == 0;          // every bit in S is 0
    const bool b_clause = (x.bits & sbar) != 0;       // some bit outside S is 1
    return (a_clause && b_clause) ? 1 : 0;
}

int choose_t(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("choose_t: epsilon must lie in (0,1)");
    }
    const int base = static_cast<int>(std::ceil(64.0 * std::log(1.0 / epsilon)));
    const int t = ((base + 7) / 8) * 8;
    return t < 8 ? 8 : t;
}

SubsetFamily sample_family(std::uint32_t n, int t, std::mt19937_64& rng) {
    SubsetFamily f;
    f.n = n;
    f.t = t;
    f.subsets.reserve(t);
    std::uniform_int_distribution<std::uint64_t> bit(0, 1);
    for (int i = 0; i < t; ++i) {
        SubsetMask m = 0;
        for (std::uint32_t j = 0; j < n; ++j) {
            if (bit(rng)) m |= std::uint64_t(1) << j;
        }
        f.subsets.push_back(m);
    }
    return f;
}

SubsetFamily sample_family(std::uint32_t n, int t, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SubsetFamily f = sample_family(n, t, rng);
    f.seed = seed;
    return f;
}

int repeated_gadget_decision(const SubsetFamily& family, const BitString& x) {
    int successes = 0;
    for (SubsetMask s : family.subsets) successes += gadget_eval(s, x);
    // accept iff successes > 3t/8, in exact integer arithmetic
    return 8 * successes > 3 * family.t ? 1 : 0;
}

GadgetErrorProfile gadget_error_profile(const SubsetFamily& family, double theta) {
    if (family.n > 20) throw Unsupported("gadget_error_profile: n > 20");
    GadgetErrorProfile profile;
    const std::uint64_t size = std::uint64_t(1) << family.n;
    profile.delta.resize(size);
    const double c2 = std::cos(theta) * std::cos(theta);
    const double s2 = std::sin(theta) * std::sin(theta);
    for (std::uint64_t v = 0; v < size; ++v) {
        BitString x{family.n, v};
        const int wrong = repeated_gadget_decision(family, x) != exact_k(x, 1) ? 1 : 0;
        profile.delta[v] = static_cast<std::uint8_t>(wrong);
        if (wrong) {
            const int w = x.weight();
            profile.weighted_error +=
                std::pow(s2, w) * std::pow(c2, static_cast<int>(family.n) - w);
        }
    }
    return profile;
}

DerandomizedFamily derandomize_family(std::uint32_t n, int t, double theta, int trials,
                                      std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("derandomize_family: trials must be >= 1");
    if (n > 20) throw Unsupported("derandomize_family: n > 20 (exhaustive x enumeration)");
    std::mt19937_64 rng(seed);
    DerandomizedFamily best;
    best.trials = trials;
    best.weighted_error = 2.0;
    for (int trial = 0; trial < trials; ++trial) {
        SubsetFamily f = sample_family(n, t, rng);
        f.seed = seed;
        const GadgetErrorProfile profile = gadget_error_profile(f, theta);
        if (profile.weighted_error < best.weighted_error) {
            best.family = std::move(f);
            best.weighted_error = profile.weighted_error;
        }
    }
    return best;
}

}  // namespace qdicke
