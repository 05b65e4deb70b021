#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>

#include "qdicke/errors.hpp"
#include "qdicke/statevector.hpp"
#include "qdicke/synth_qac0.hpp"
#include "qdicke/verify.hpp"

using namespace qdicke;

namespace {

std::vector<QubitId> system_qubits(int n) {
    std::vector<QubitId> q(n);
    for (int j = 0; j < n; ++j) q[j] = j;
    return q;
}

// independent bisection on the polynomial C(n,k) s^k (1-s)^(n-k) = c, small root
double poly_small_root(int n, int k, double c) {
    auto poly = [&](double s) {
        double binom = 1.0;
        for (int i = 0; i < k; ++i) binom = binom * double(n - i) / double(i + 1);
        return binom * std::pow(s, k) * std::pow(1.0 - s, n - k) - c;
    };
    double lo = 0.0, hi = double(k) / n;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (poly(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(BinomialOverlap, FrozenValuesAndEndpoints) {
    EXPECT_NEAR(binomial_overlap_s(4, 1, 0.25), 0.421875, 1e-15);
    EXPECT_NEAR(binomial_overlap(3, 1, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(binomial_overlap(3, 1, std::acos(-1.0) / 2.0), 0.0, 1e-12);
    EXPECT_NEAR(binomial_overlap(3, 3, std::acos(-1.0) / 2.0), 1.0, 1e-12);
}

TEST(BinomialOverlap, MaxExceedsExpMinusKUpTo1000) {
    for (int n = 2; n <= 1000; n += (n < 32 ? 1 : 37)) {
        for (int k = 1; k < std::min(n, 6); ++k) {
            EXPECT_GE(binomial_overlap_s(n, k, double(k) / n), std::exp(-double(k)));
        }
    }
}

TEST(GroverRounds, FrozenValuesAndExactAmplification) {
    const GroverRounds r1 = grover_rounds(1);
    EXPECT_EQ(r1.rounds, 1);
    EXPECT_NEAR(r1.c_target, 0.25, 1e-15);

    const GroverRounds r2 = grover_rounds(2);
    EXPECT_EQ(r2.rounds, 2);
    EXPECT_NEAR(r2.c_target, (3.0 - std::sqrt(5.0)) / 8.0, 1e-15);  // sin^2(pi/10)

    for (int k = 1; k <= 4; ++k) {
        const GroverRounds r = grover_rounds(k);
        EXPECT_LT(r.c_target, std::exp(-double(k)));
        const double omega = std::asin(std::sqrt(r.c_target));
        EXPECT_NEAR(std::pow(std::sin((2.0 * r.rounds + 1.0) * omega), 2.0), 1.0, 1e-12);
    }
}

TEST(SolveTheta, MatchesIndependentPolynomialRoot) {
    const AngleSolution sol = solve_theta(4, 1, 0.25);
    const double s_expected = poly_small_root(4, 1, 0.25);
    EXPECT_NEAR(std::pow(std::sin(sol.theta), 2.0), s_expected, 1e-10);
    EXPECT_NEAR(binomial_overlap(4, 1, sol.theta), 0.25, 1e-13);
    EXPECT_GT(sol.theta, 0.0);
    EXPECT_LT(sol.theta, std::asin(std::sqrt(0.25)));
    EXPECT_EQ(sol.branch, AngleSolution::Branch::Increasing);
}

TEST(SolveTheta, ResidualsAcrossGrid) {
    for (int n = 3; n <= 12; ++n) {
        for (int k = 1; k <= std::min(3, n - 1); ++k) {
            const GroverRounds r = grover_rounds(k);
            const AngleSolution sol = solve_theta(n, k, r.c_target);
            EXPECT_LT(std::abs(binomial_overlap(n, k, sol.theta) - r.c_target), 1e-12);
        }
    }
    EXPECT_THROW(solve_theta(4, 1, 0.9), NoSolution);
}

TEST(SynthThreshold, BaseCaseIsSingleNor) {
    const Circuit c = synth_threshold_circuit(4, 0);
    ASSERT_EQ(c.gate_count(), 1u);
    const auto* mt = std::get_if<MultiToffoli>(&c.layers[0].gates[0]);
    ASSERT_NE(mt, nullptr);
    EXPECT_EQ(mt->controls.size(), 4u);
    for (const auto& ctl : mt->controls) EXPECT_FALSE(ctl.positive);
    const Verdict v = truth_table_check(
        c, [](const BitString& x) { return threshold_k(x, 0); }, 4);
    EXPECT_TRUE(v.pass);
}

TEST(SynthThreshold, TruthTablesBothSchedules) {
    for (const Schedule schedule : {Schedule::Sequential, Schedule::Parallel}) {
        SynthesisConfig cfg;
        cfg.schedule = schedule;
        cfg.max_qubits = 256;
        for (int n = 2; n <= 6; ++n) {
            for (int k = 0; k <= std::min(n, 3); ++k) {
                const Circuit c = synth_threshold_circuit(n, k, cfg);
                const Verdict v = truth_table_check(
                    c, [k](const BitString& x) { return threshold_k(x, k); }, n);
                ASSERT_TRUE(v.pass) << "n=" << n << " k=" << k << " " << v.detail;
            }
        }
    }
}

TEST(SynthThreshold, DenseAndClassicalRoutesAgree) {
    // same circuit, checked by basis-state propagation and by full statevector
    const Circuit c = synth_threshold_circuit(4, 1);
    const Verdict classical = truth_table_check(
        c, [](const BitString& x) { return threshold_k(x, 1); }, 4);
    ASSERT_TRUE(classical.pass);
    for (std::uint64_t x = 0; x < 16; ++x) {
        StateVector s = StateVector::basis(c.qubit_count, x);
        apply_circuit(s, expand_macros(c));
        const int expected = threshold_k(BitString{4, x}, 1);
        const std::uint64_t want = x | (std::uint64_t(expected) << 4);
        EXPECT_GT(std::norm(s.amps[want]), 1.0 - 1e-9);
    }
}

TEST(SynthExact, AgainstOracleAndRandomInputs) {
    SynthesisConfig cfg;
    cfg.max_qubits = 256;
    for (int n = 2; n <= 6; ++n) {
        for (int k = 0; k <= std::min(n, 2); ++k) {
            const Circuit c = synth_exact_circuit(n, k, cfg);
            const Verdict v =
                truth_table_check(c, [k](const BitString& x) { return exact_k(x, k); }, n);
            ASSERT_TRUE(v.pass) << "n=" << n << " k=" << k;
        }
    }
    // EXACT_k(0^n) = [k == 0]
    for (int k = 0; k <= 2; ++k) {
        const Circuit c = synth_exact_circuit(5, k, cfg);
        const Verdict v = truth_table_check(
            c, [k](const BitString& x) { return exact_k(x, k); }, 5);
        EXPECT_TRUE(v.pass);
    }
}

TEST(SynthExact, RandomSpotChecksAtN10) {
    SynthesisConfig cfg;
    cfg.max_qubits = 256;
    std::mt19937_64 rng(2025);
    for (int k = 0; k <= 2; ++k) {
        const Circuit c = synth_exact_circuit(10, k, cfg);
        const Verdict v = truth_table_check(
            c, [k](const BitString& x) { return exact_k(x, k); }, 10);
        EXPECT_TRUE(v.pass) << "k=" << k;
    }
    (void)rng;
}

TEST(SynthExact, EdgeWeights) {
    SynthesisConfig cfg;
    cfg.max_qubits = 64;
    {
        // k = n: EXACT is the AND of all inputs
        const Circuit c = synth_exact_circuit(3, 3, cfg);
        const Verdict v = truth_table_check(
            c, [](const BitString& x) { return exact_k(x, 3); }, 3);
        EXPECT_TRUE(v.pass);
    }
    {
        // k = 1 on a single input: EXACT_1(x) = x
        const Circuit c = synth_exact_circuit(1, 1, cfg);
        const Verdict v = truth_table_check(
            c, [](const BitString& x) { return exact_k(x, 1); }, 1);
        EXPECT_TRUE(v.pass);
    }
}

TEST(PhaseOracle, SignsAncillaeAndInvolution) {
    const Circuit bit = synth_exact_circuit(3, 1);
    const Circuit oracle = phase_oracle(bit);

    // uniform superposition picks up -1 exactly on weight-1 states
    StateVector s = StateVector::zero(oracle.qubit_count);
    for (int q = 0; q < 3; ++q) apply_gate(s, make_h(q));
    apply_circuit(s, oracle);
    for (std::uint64_t x = 0; x < 8; ++x) {
        const double expected = std::popcount(x) == 1 ? -1.0 : 1.0;
        EXPECT_NEAR(s.amps[x].real(), expected / std::sqrt(8.0), 1e-12) << "x=" << x;
        EXPECT_NEAR(s.amps[x].imag(), 0.0, 1e-12);
    }
    // ancillae stay |0>
    std::vector<QubitId> anc;
    for (QubitId q = 3; q < oracle.qubit_count; ++q) anc.push_back(q);
    EXPECT_NEAR(prob_all_zero(s, anc), 1.0, 1e-12);

    // applying the oracle twice is the identity
    std::mt19937_64 rng(77);
    StateVector psi = StateVector::zero(oracle.qubit_count);
    std::normal_distribution<double> dist;
    for (std::size_t i = 0; i < (std::size_t(1) << 3); ++i) {
        psi.amps[i] = cplx(dist(rng), dist(rng));
    }
    psi.normalize();
    StateVector twice = psi;
    apply_circuit(twice, oracle);
    apply_circuit(twice, oracle);
    EXPECT_GT(fidelity(psi, twice).value, 1.0 - 1e-12);
}

TEST(DickeQac0, SmallestCaseMatchesWState) {
    const DickeSynthesis synth = synth_dicke_qac0(3, 1);
    const StateVector state = run(synth.circuit);
    EXPECT_GT(reduced_overlap(state, system_qubits(3), dicke_state(3, 1)).value, 1.0 - 1e-12);
}

TEST(DickeQac0, SweepFidelityAndAncillaRestoration) {
    for (int k = 1; k <= 2; ++k) {
        for (int n = k + 1; n <= 6; ++n) {
            const DickeSynthesis synth = synth_dicke_qac0(n, k);
            const StateVector state = run(synth.circuit);
            EXPECT_GT(reduced_overlap(state, system_qubits(n), dicke_state(n, k)).value,
                      1.0 - 1e-9)
                << "n=" << n << " k=" << k;
            std::vector<QubitId> anc;
            for (QubitId q = n; q < synth.circuit.qubit_count; ++q) anc.push_back(q);
            EXPECT_GT(prob_all_zero(state, anc), 1.0 - 1e-9);
        }
    }
}

TEST(DickeQac0, AmplitudesUniformPositiveAfterPhaseNormalization) {
    const DickeSynthesis synth = synth_dicke_qac0(4, 2);
    StateVector state = run(synth.circuit);
    state.normalize_global_phase();
    const double expected = 1.0 / std::sqrt(6.0);
    const std::uint64_t sys_mask = 0b1111;
    for (std::uint64_t x = 0; x < state.amps.size(); ++x) {
        if ((x & ~sys_mask) != 0) continue;
        if (std::popcount(x) == 2) {
            EXPECT_NEAR(state.amps[x].real(), expected, 1e-9);
            EXPECT_NEAR(state.amps[x].imag(), 0.0, 1e-9);
        }
    }
}

TEST(DickeQac0, EdgeWeightsAndComplement) {
    // k = 0: empty circuit
    const DickeSynthesis zero = synth_dicke_qac0(4, 0);
    EXPECT_EQ(zero.circuit.gate_count(), 0u);
    // k = n: a single X layer
    const DickeSynthesis full = synth_dicke_qac0(4, 4);
    const StateVector all_ones = run(full.circuit);
    EXPECT_NEAR(std::norm(all_ones.amps[0b1111]), 1.0, 1e-12);
    // k within the cap is synthesized directly, even above n/2
    const DickeSynthesis high = synth_dicke_qac0(4, 3);
    const StateVector state = run(high.circuit);
    EXPECT_GT(reduced_overlap(state, system_qubits(4), dicke_state(4, 3)).value, 1.0 - 1e-9);
    // beyond the cap the complement plus an X layer takes over
    const DickeSynthesis comp = synth_dicke_qac0(6, 5);
    const StateVector cstate = run(comp.circuit);
    EXPECT_GT(reduced_overlap(cstate, system_qubits(6), dicke_state(6, 5)).value, 1.0 - 1e-9);
}

TEST(DickeQac0, DepthFlatAcrossNParallelSchedule) {
    SynthesisConfig cfg;
    cfg.schedule = Schedule::Parallel;
    cfg.max_qubits = 4096;
    for (int k = 1; k <= 2; ++k) {
        int expected = -1;
        for (int n = k + 1; n <= 10; ++n) {
            const DickeSynthesis synth = synth_dicke_qac0(n, k, cfg);
            if (expected < 0) expected = synth.report.depth;
            EXPECT_EQ(synth.report.depth, expected) << "n=" << n << " k=" << k;
        }
    }
}

TEST(DickeQac0, WeightCapRejectsLargeK) {
    EXPECT_THROW(synth_dicke_qac0(12, 5), Unsupported);
    EXPECT_THROW(synth_threshold_circuit(12, 5), Unsupported);
}

TEST(WApprox, BitCircuitMatchesDecisionOracle) {
    for (const bool parallel : {false, true}) {
        WApproxConfig cfg;
        cfg.parallel_gadgets = parallel;
        for (std::uint64_t seed : {1u, 2u}) {
            const SubsetFamily family = sample_family(4, 8, seed);
            const Circuit bit = build_approx_exact1_bit(4, family, cfg);
            const Verdict v = truth_table_check(
                bit,
                [&](const BitString& x) { return repeated_gadget_decision(family, x); }, 4,
                parallel ? "par" : "seq");
            ASSERT_TRUE(v.pass) << v.detail;
        }
    }
}

TEST(WApprox, ParallelGadgetsCutDepth) {
    const SubsetFamily family = sample_family(3, 8, std::uint64_t(5));
    WApproxConfig seq, par;
    par.parallel_gadgets = true;
    const int d_seq = depth(expand_macros(build_approx_exact1_bit(3, family, seq)));
    const int d_par = depth(expand_macros(build_approx_exact1_bit(3, family, par)));
    EXPECT_LT(d_par, d_seq);
}

TEST(WApprox, ConfigMismatchOnWrongT) {
    DerandomizedFamily family;
    family.family = sample_family(4, 8, std::uint64_t(3));
    EXPECT_THROW(synth_w_approx(4, 0.5, family), ConfigMismatch);
}

TEST(WApprox, PerfectOracleReducesToExactPreparation) {
    DerandomizedFamily family;
    family.family = sample_family(4, choose_t(0.5 / 9.0), std::uint64_t(9));
    WApproxConfig cfg;
    cfg.perfect_oracle = true;
    const WApproxSynthesis synth = synth_w_approx(4, 0.5, family, cfg);
    const StateVector state = run(synth.circuit);
    EXPECT_GT(reduced_overlap(state, system_qubits(4), dicke_state(4, 1)).value, 1.0 - 1e-12);
}

TEST(WApprox, AncillaCountIndependentOfN) {
    const int t = choose_t(0.5 / 9.0);
    int first = -1;
    for (int n : {4, 6}) {
        const AngleSolution sol = solve_theta(n, 1, 0.25);
        const DerandomizedFamily family = derandomize_family(n, t, sol.theta, 3, 11);
        const WApproxSynthesis synth = synth_w_approx(n, 0.5, family);
        const int ancillae = synth.report.ancilla_count;
        if (first < 0) first = ancillae;
        EXPECT_EQ(ancillae, first);
    }
}
