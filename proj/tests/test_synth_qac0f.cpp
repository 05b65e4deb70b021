#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "qdicke/errors.hpp"
#include "qdicke/statevector.hpp"
#include "qdicke/synth_qac0f.hpp"
#include "qdicke/verify.hpp"

using namespace qdicke;

TEST(PGood, FrozenValuesAndBound) {
    EXPECT_NEAR(p_good(4, 1), 0.421875, 1e-15);
    EXPECT_NEAR(p_good(4, 2), 0.375, 1e-15);  // 6 * (1/2)^4
    for (int n = 2; n <= 1000; n += (n < 40 ? 1 : 53)) {
        for (int k = 1; k < std::min(n, 8); ++k) {
            EXPECT_GE(p_good(n, k), std::exp(-double(k)) * (1.0 - 1e-12));
        }
    }
}

TEST(Gamma, ExactArithmetic) {
    // 1 - (37/64)^3 = 211491/262144
    EXPECT_NEAR(gamma_success(4, 1, 3), 211491.0 / 262144.0, 1e-15);
    EXPECT_NEAR(gamma_success(5, 2, 1), p_good(5, 2), 1e-15);
    for (const auto& [n, k, M] :
         std::vector<std::tuple<int, int, int>>{{3, 1, 2}, {4, 1, 3}, {6, 2, 4}}) {
        EXPECT_GE(gamma_success(n, k, M), 1.0 - std::exp(-double(M) * p_good(n, k)));
    }
}

TEST(ChooseM, PaperAndDeskModes) {
    EXPECT_EQ(choose_M(4, 1, MMode::Paper), 3);  // sqrt(4) = 2 gives 0.84 < 1
    for (int n : {3, 4, 6, 9}) {
        const int M = choose_M(n, 1, MMode::Paper);
        EXPECT_GE(M * p_good(n, 1), 1.0);
        EXPECT_GE(gamma_success(n, 1, M), 1.0 - std::exp(-1.0));
    }
    EXPECT_EQ(choose_M(3, 1, MMode::Desk, 0.5), 2);
    EXPECT_NEAR(gamma_success(3, 1, 2), 56.0 / 81.0, 1e-15);
}

TEST(TuneAmplitude, TargetsAndEdgeCases) {
    const AmplitudeTuning tuning = tune_amplitude(gamma_success(4, 1, 3));
    EXPECT_EQ(tuning.oaa_rounds, 1);
    EXPECT_NEAR(tuning.gamma_tilde, 0.25, 1e-15);

    const AmplitudeTuning exact = tune_amplitude(0.25);
    EXPECT_EQ(exact.oaa_rounds, 1);
    EXPECT_NEAR(std::sin(exact.rotation), 1.0, 1e-12);  // full transfer to |1>

    const AmplitudeTuning low = tune_amplitude(0.1);  // below sin^2(pi/6): larger l
    EXPECT_GT(low.oaa_rounds, 1);
    EXPECT_LE(low.gamma_tilde, 0.1);
    EXPECT_THROW(tune_amplitude(0.0), std::invalid_argument);
}

TEST(Layout, PlansDisjointRegistersAndJson) {
    Qac0fConfig cfg;
    const BlockLayout layout = plan_layout(3, 1, 2, cfg);
    EXPECT_EQ(layout.total_qubits, 2u * 3 + 2 + 2 + 3 + 3);
    const std::string j = layout.to_json();
    EXPECT_NE(j.find("\"T1\""), std::string::npos);
    EXPECT_NE(j.find("\"Q\""), std::string::npos);

    Qac0fConfig par = cfg;
    par.cswap = CswapMode::Parallel;
    const BlockLayout with_work = plan_layout(3, 1, 2, par);
    EXPECT_EQ(with_work.work.size(), std::size_t(2 * 2 + 2 * 3));
}

TEST(BlockInit, MarginalsAndFlagExactness) {
    Qac0fConfig cfg;
    const int n = 3, k = 1, M = 2;
    const BlockLayout layout = plan_layout(n, k, M, cfg);
    CircuitBuilder b(layout.total_qubits, Model::QAC0F);
    synth_block_init(b, layout, cfg);
    const StateVector state = run(b.take());

    // each block's weight-k probability is p_good
    for (int i = 0; i < M; ++i) {
        const auto dist = register_distribution(state, layout.blocks[i]);
        double weight_k = 0.0;
        for (const auto& [value, p] : dist) {
            if (std::popcount(value) == k) weight_k += p;
        }
        EXPECT_NEAR(weight_k, p_good(n, k), 1e-10);
    }
    // Pr[A = 0^M] = (1 - p_good)^M
    const auto a_dist = register_distribution(state, layout.flags);
    EXPECT_NEAR(a_dist.at(0), std::pow(1.0 - p_good(n, k), M), 1e-10);

    // conditioned on a_1 = 1, block 1 is exactly the Dicke state
    const double cond =
        conditional_reduced_overlap(state, layout.flags[0], layout.blocks[0], dicke_state(n, k))
            .value;
    EXPECT_NEAR(cond, 1.0, 1e-10);
}

TEST(LsbOnehot, ExhaustiveOverFlagPatterns) {
    // drive the A register with every basis pattern and read S
    Qac0fConfig cfg;
    const int M = 4;
    const BlockLayout layout = plan_layout(1, 1, M, cfg);
    for (std::uint64_t pattern = 0; pattern < (1u << M); ++pattern) {
        CircuitBuilder b(layout.total_qubits, Model::QAC0F);
        for (int i = 0; i < M; ++i) {
            if ((pattern >> i) & 1u) b.add(make_x(layout.flags[i]));
        }
        synth_lsb_onehot(b, layout);
        const StateVector state = run(b.take());
        const auto dist = register_distribution(state, layout.selection);
        ASSERT_EQ(dist.size(), 1u);
        const std::uint64_t s_value = dist.begin()->first;
        if (pattern == 0) {
            EXPECT_EQ(s_value, 0u);
        } else {
            EXPECT_EQ(std::popcount(s_value), 1);
            EXPECT_EQ(s_value, pattern & (~pattern + 1));  // lowest set bit
        }
    }
}

TEST(CswapExtract, SingleBlockSwapsOnBasisStates) {
    Qac0fConfig cfg;
    const BlockLayout layout = plan_layout(2, 1, 1, cfg);
    CircuitBuilder b(layout.total_qubits, Model::QAC0F);
    // T_1 = |10>, s_1 = 1
    b.add(make_x(layout.blocks[0][0]));
    b.add(make_x(layout.selection[0]));
    synth_cswap_extract(b, layout, cfg);
    const StateVector state = run(b.take());
    const auto q_dist = register_distribution(state, layout.output);
    EXPECT_NEAR(q_dist.at(1), 1.0, 1e-12);
    const auto t_dist = register_distribution(state, layout.blocks[0]);
    EXPECT_NEAR(t_dist.at(0), 1.0, 1e-12);
}

TEST(CswapExtract, AllThreeModesProduceTheSameState) {
    const int n = 2, k = 1, M = 2;
    StateVector reference;
    std::uint64_t base_mask = 0;
    for (const CswapMode mode : {CswapMode::Sequential, CswapMode::Fanout, CswapMode::Parallel}) {
        Qac0fConfig cfg;
        cfg.cswap = mode;
        const BlockLayout layout = plan_layout(n, k, M, cfg);
        CircuitBuilder b(layout.total_qubits, Model::QAC0F);
        synth_block_init(b, layout, cfg);
        synth_lsb_onehot(b, layout);
        synth_cswap_extract(b, layout, cfg);
        const StateVector state = run(b.take());
        if (mode == CswapMode::Sequential) {
            reference = state;
            base_mask = (std::uint64_t(1) << layout.total_qubits) - 1;
            continue;
        }
        // work qubits must be restored; common prefix must agree exactly
        double worst = 0.0;
        for (std::size_t idx = 0; idx < state.amps.size(); ++idx) {
            const cplx expected = (idx & ~base_mask) == 0 ? reference.amps[idx & base_mask]
                                                          : cplx(0);
            worst = std::max(worst, std::abs(state.amps[idx] - expected));
        }
        EXPECT_LT(worst, 1e-12);
    }
}

TEST(GoodFlag, OrOfSuccessFlags) {
    Qac0fConfig cfg;
    const BlockLayout layout = plan_layout(1, 1, 3, cfg);
    for (std::uint64_t pattern = 0; pattern < 8; ++pattern) {
        CircuitBuilder b(layout.total_qubits, Model::QAC0F);
        for (int i = 0; i < 3; ++i) {
            if ((pattern >> i) & 1u) b.add(make_x(layout.flags[i]));
        }
        synth_good_flag(b, layout);
        const StateVector state = run(b.take());
        const auto dist = register_distribution(state, {layout.good_flag});
        EXPECT_NEAR(dist.at(pattern == 0 ? 0 : 1), 1.0, 1e-12);
    }
}

TEST(Pipeline, SmallInstanceEndToEnd) {
    const int n = 3, k = 1, M = 2;
    const Qac0fSynthesis synth = synth_dicke_qac0f(n, k, M);
    const double gamma = gamma_success(n, k, M);

    const StateVector pre = run(synth.preparation);
    const auto a0 = register_distribution(pre, {synth.layout.good_flag});
    EXPECT_NEAR(a0.at(1), gamma, 1e-10);
    const auto ab = register_distribution(pre, {synth.layout.tuning, synth.layout.weight_flag});
    EXPECT_NEAR(ab.at(3), synth.tuning.gamma_tilde, 1e-10);
    EXPECT_NEAR(conditional_reduced_overlap(pre, synth.layout.good_flag, synth.layout.output,
                                            dicke_state(n, k))
                    .value,
                1.0, 1e-10);
    EXPECT_NEAR(reduced_overlap(pre, synth.layout.output, dicke_state(n, k)).value, gamma, 1e-9);

    const StateVector fin = run(synth.circuit);
    EXPECT_GT(reduced_overlap(fin, synth.layout.output, dicke_state(n, k)).value, 1.0 - 1e-9);
    EXPECT_NEAR(fin.norm(), 1.0, 1e-10);
}

TEST(Pipeline, SemanticAndCircuitOraclesAgree) {
    const int n = 3, k = 1, M = 2;
    Qac0fConfig semantic;
    Qac0fConfig circuit_oracle;
    circuit_oracle.oracle = OracleImpl::CircuitK;
    circuit_oracle.max_qubits = 32;
    const Qac0fSynthesis a = synth_dicke_qac0f(n, k, M, semantic);
    const Qac0fSynthesis b = synth_dicke_qac0f(n, k, M, circuit_oracle);
    const StateVector fa = run(a.circuit);
    const StateVector fb = run(b.circuit, 32);
    EXPECT_GT(reduced_overlap(fa, a.layout.output, dicke_state(n, k)).value, 1.0 - 1e-9);
    EXPECT_GT(reduced_overlap(fb, b.layout.output, dicke_state(n, k)).value, 1.0 - 1e-9);
    // pre-OAA flag distributions agree between the two oracle realizations
    const StateVector pa = run(a.preparation);
    const StateVector pb = run(b.preparation, 32);
    const auto da = register_distribution(pa, {a.layout.good_flag, a.layout.weight_flag});
    const auto db = register_distribution(pb, {b.layout.good_flag, b.layout.weight_flag});
    for (const auto& [value, p] : da) {
        EXPECT_NEAR(p, db.count(value) ? db.at(value) : 0.0, 1e-10);
    }
}

TEST(Pipeline, ResourceLimitCarriesLayout) {
    Qac0fConfig cfg;
    cfg.max_qubits = 24;
    try {
        synth_dicke_qac0f(4, 1, 3, cfg);
        FAIL() << "expected ResourceLimit";
    } catch (const ResourceLimit& e) {
        EXPECT_EQ(e.estimated_qubits, 25);
        EXPECT_NE(std::string(e.what()).find("\"Q\""), std::string::npos);
    }
}

TEST(Pipeline, PaperModeTanksGammaAboveConstant) {
    for (int n : {3, 4, 5}) {
        const int M = choose_M(n, 1, MMode::Paper);
        EXPECT_GE(gamma_success(n, 1, M), 0.6);
    }
}
