#include <gtest/gtest.h>

#include <cmath>

#include "qdicke/boolean.hpp"
#include "qdicke/errors.hpp"
#include "qdicke/serialize.hpp"
#include "qdicke/synth_qac0.hpp"

using namespace qdicke;

TEST(ExactThreshold, Basics) {
    EXPECT_EQ(exact_k(BitString::from_string("1100"), 2), 1);
    EXPECT_EQ(exact_k(BitString::from_string("1110"), 2), 0);
    EXPECT_EQ(exact_k(BitString::from_string("0000"), 0), 1);
    EXPECT_EQ(threshold_k(BitString::from_string("0110"), 2), 1);
    EXPECT_EQ(threshold_k(BitString::from_string("0111"), 2), 0);
}

TEST(ExactThreshold, RelationHoldsExhaustively) {
    for (int n = 1; n <= 12; ++n) {
        for (int k = 0; k <= std::min(n, 4); ++k) {
            for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x) {
                const BitString bits{static_cast<std::uint32_t>(n), x};
                const int rel = threshold_k(bits, k) & (1 - threshold_k(bits, k - 1));
                ASSERT_EQ(exact_k(bits, k), rel);
            }
        }
    }
}

TEST(PartitionSets, BinaryRepresentationSplit) {
    const PartitionSets p4 = partition_sets(4);
    ASSERT_EQ(p4.levels.size(), 2u);
    EXPECT_EQ(p4.levels[0][0], (std::vector<std::uint32_t>{0, 2}));
    EXPECT_EQ(p4.levels[0][1], (std::vector<std::uint32_t>{1, 3}));

    const PartitionSets p8 = partition_sets(8);
    ASSERT_EQ(p8.levels.size(), 3u);
    for (const auto& level : p8.levels) {
        EXPECT_EQ(level[0].size(), 4u);
        EXPECT_EQ(level[1].size(), 4u);
    }

    const PartitionSets p1 = partition_sets(1);
    ASSERT_EQ(p1.levels.size(), 1u);
}

TEST(PartitionSets, SeparatesEveryPair) {
    for (std::uint32_t n = 2; n <= 16; ++n) {
        const PartitionSets p = partition_sets(n);
        for (std::uint32_t a = 0; a < n; ++a) {
            for (std::uint32_t b = a + 1; b < n; ++b) {
                bool separated = false;
                for (const auto& level : p.levels) {
                    const bool a0 = std::find(level[0].begin(), level[0].end(), a) != level[0].end();
                    const bool b0 = std::find(level[0].begin(), level[0].end(), b) != level[0].end();
                    if (a0 != b0) separated = true;
                }
                ASSERT_TRUE(separated) << "pair " << a << "," << b << " at n=" << n;
            }
        }
    }
}

TEST(ThresholdRecursion, HandPickedAndExhaustive) {
    EXPECT_EQ(threshold_recursion_eval(BitString::from_string("0000"), 3), 1);
    EXPECT_EQ(threshold_recursion_eval(BitString::from_string("1111"), 2), 0);
    for (int n = 2; n <= 8; ++n) {
        for (int k = 0; k <= 3; ++k) {
            for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x) {
                const BitString bits{static_cast<std::uint32_t>(n), x};
                ASSERT_EQ(threshold_recursion_eval(bits, k), threshold_k(bits, k))
                    << "n=" << n << " k=" << k << " x=" << x;
            }
        }
    }
}

TEST(Gadget, ZeroWeightNeverAccepts) {
    const BitString zero{6, 0};
    for (SubsetMask s = 0; s < 64; ++s) EXPECT_EQ(gadget_eval(s, zero), 0);
}

TEST(Gadget, SingleOneAcceptsWhenSubsetAvoidsIt) {
    // x has its 1 at position 2; S containing everything else accepts
    const BitString x{5, std::uint64_t(1) << 2};
    const SubsetMask s = 0b11011;
    EXPECT_EQ(gadget_eval(s, x), 1);
    EXPECT_EQ(gadget_eval(s | (1u << 2), x), 0);
}

TEST(Gadget, ExhaustiveAcceptanceCounts) {
    for (int n = 2; n <= 8; ++n) {
        for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x) {
            const BitString bits{static_cast<std::uint32_t>(n), x};
            std::uint64_t count = 0;
            for (SubsetMask s = 0; s < (std::uint64_t(1) << n); ++s) count += gadget_eval(s, bits);
            const std::uint64_t expected =
                bits.weight() == 0 ? 0 : std::uint64_t(1) << (n - bits.weight());
            ASSERT_EQ(count, expected);
        }
    }
}

TEST(Gadget, MonteCarloWeightOneRate) {
    // acceptance rate for |x| = 1 is 1/2
    std::mt19937_64 rng(1234);
    const BitString x{8, 1};
    int accepts = 0;
    const int samples = 100000;
    for (int i = 0; i < samples; ++i) {
        accepts += gadget_eval(sample_family(8, 1, rng).subsets[0], x);
    }
    EXPECT_NEAR(double(accepts) / samples, 0.5, 0.01);
}

TEST(ChooseT, FrozenValuesAndProperties) {
    EXPECT_EQ(choose_t(1.0 / std::exp(1.0)), 64);
    EXPECT_EQ(choose_t(0.1), 152);  // ceil(64 ln 10) = 148, next multiple of 8
    EXPECT_EQ(choose_t(0.5 / 9.0), 192);
    // shrinking the error budget can only grow the repetition count
    double prev = 0;
    for (double eps : {0.9, 0.5, 0.25, 0.1, 0.01}) {
        const int t = choose_t(eps);
        EXPECT_GE(t, prev);
        prev = t;
        EXPECT_LE(std::exp(-double(t) / 64.0), eps);
        EXPECT_EQ(t % 8, 0);
    }
    EXPECT_THROW(choose_t(0.0), std::invalid_argument);
    EXPECT_THROW(choose_t(1.0), std::invalid_argument);
}

TEST(RepeatedGadget, ThresholdArithmetic) {
    // all-zero input: every gadget rejects
    SubsetFamily family = sample_family(6, 16, std::uint64_t(99));
    EXPECT_EQ(repeated_gadget_decision(family, BitString{6, 0}), 0);

    // hand-built family for x = 100000 (one set bit at position 0):
    // a gadget accepts iff its subset avoids position 0
    SubsetFamily hand;
    hand.n = 3;
    hand.t = 8;
    hand.subsets = {0b010, 0b100, 0b110, 0b000,   // avoid bit 0: accept
                    0b001, 0b011, 0b101, 0b111};  // contain bit 0: reject
    const BitString x{3, 1};
    // 4 successes of 8: 4 > 3t/8 = 3, so accept
    EXPECT_EQ(repeated_gadget_decision(hand, x), 1);
    hand.subsets[3] = 0b001;  // 3 successes: reject
    EXPECT_EQ(repeated_gadget_decision(hand, x), 0);
}

TEST(RepeatedGadget, EmpiricalErrorWithinChernoffBound) {
    std::mt19937_64 rng(777);
    const int t = 64, trials = 10000;
    const double bound = std::exp(-double(t) / 64.0);
    for (int weight : {1, 2}) {
        const BitString x{8, (std::uint64_t(1) << weight) - 1};
        const int expected = weight == 1 ? 1 : 0;
        int errors = 0;
        for (int i = 0; i < trials; ++i) {
            if (repeated_gadget_decision(sample_family(8, t, rng), x) != expected) ++errors;
        }
        const double rate = double(errors) / trials;
        EXPECT_LE(rate, bound + 3.0 * std::sqrt(bound * (1 - bound) / trials));
    }
}

TEST(Derandomize, ReturnsMinimumOfSampledStream) {
    const std::uint32_t n = 6;
    const int t = 16, trials = 40;
    const double theta = 0.4;
    const DerandomizedFamily best = derandomize_family(n, t, theta, trials, 2024);

    // replay the identical RNG stream and compute the mean weighted error
    std::mt19937_64 rng(2024);
    double mean = 0.0, minimum = 2.0;
    for (int i = 0; i < trials; ++i) {
        const SubsetFamily f = sample_family(n, t, rng);
        const double err = gadget_error_profile(f, theta).weighted_error;
        mean += err;
        minimum = std::min(minimum, err);
    }
    mean /= trials;
    EXPECT_NEAR(best.weighted_error, minimum, 1e-15);
    EXPECT_LE(best.weighted_error, mean);
}

TEST(Derandomize, SmallInstanceFindsLowError) {
    // n = 4, t = 16: a sub-0.2 family shows up within 100 trials
    const double theta = solve_theta(4, 1, 0.25).theta;
    const DerandomizedFamily best = derandomize_family(4, 16, theta, 100, 4242);
    EXPECT_LT(best.weighted_error, 0.2);
}

TEST(Derandomize, MeanErrorMatchesChernoffBudget) {
    // with t = choose_t(eta), the expected weighted error stays below eta
    const double eta = 0.25;
    const int t = choose_t(eta);
    const double theta = 0.2;
    std::mt19937_64 rng(31337);
    double mean = 0.0;
    const int samples = 30;
    for (int i = 0; i < samples; ++i) {
        mean += gadget_error_profile(sample_family(8, t, rng), theta).weighted_error;
    }
    EXPECT_LE(mean / samples, eta);
}

TEST(Derandomize, GuardsAndErrors) {
    EXPECT_THROW(derandomize_family(21, 8, 0.3, 1, 1), Unsupported);
    EXPECT_THROW(derandomize_family(4, 8, 0.3, 0, 1), std::invalid_argument);
}

TEST(FamilyJson, RoundTrip) {
    const SubsetFamily f = sample_family(7, 24, std::uint64_t(5150));
    const SubsetFamily parsed = family_from_json(family_to_json(f));
    EXPECT_EQ(parsed.n, f.n);
    EXPECT_EQ(parsed.t, f.t);
    EXPECT_EQ(parsed.seed, f.seed);
    EXPECT_EQ(parsed.subsets, f.subsets);
}
