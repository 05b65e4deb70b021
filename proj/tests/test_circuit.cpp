#include <gtest/gtest.h>

#include <random>

#include "matrix_oracle.hpp"
#include "qdicke/circuit.hpp"
#include "qdicke/errors.hpp"
#include "qdicke/statevector.hpp"

using namespace qdicke;
namespace mo = qdicke::testing;

namespace {

Circuit one_gate_circuit(std::uint32_t n, const Gate& g, Model model = Model::QAC0) {
    CircuitBuilder b(n, model);
    b.add(g);
    return b.take();
}

std::array<cplx, 2> random_qubit_state(std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    cplx a(dist(rng), dist(rng)), b(dist(rng), dist(rng));
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    return {a / norm, b / norm};
}

}  // namespace

TEST(GateValidation, RejectsMalformedGates) {
    EXPECT_THROW(validate_gate(SingleQubit{0, {cplx(1), cplx(1), cplx(0), cplx(1)}}), InvalidGate);
    EXPECT_THROW(validate_gate(GlobalCZ{{}}), InvalidGate);
    EXPECT_THROW(validate_gate(GlobalCZ{{1, 1}}), InvalidGate);
    EXPECT_THROW(validate_gate(FanOut{2, {2, 3}}), InvalidGate);
    EXPECT_THROW(validate_gate(MultiToffoli{{{0, true}, {0, false}}, 1}), InvalidGate);
    EXPECT_THROW(validate_gate(MultiToffoli{{{1, true}}, 1}), InvalidGate);
    EXPECT_THROW(validate_gate(WeightOracle{WeightOracle::Kind::BitFlip, {0, 1}, 3, 2, 1}),
                 InvalidGate);
    EXPECT_NO_THROW(validate_gate(make_h(0)));
    EXPECT_THROW(validate_gate(make_h(5), 3), InvalidGate);
}

TEST(Layers, DisjointnessEnforced) {
    Circuit c;
    c.qubit_count = 3;
    c.layers.push_back(Layer{{GlobalCZ{{0, 1}}, GlobalCZ{{1, 2}}}});
    EXPECT_THROW(validate_circuit(c), LayerConflict);

    CircuitBuilder b(3, Model::QAC0);
    b.add(GlobalCZ{{0, 1}});
    b.add(GlobalCZ{{1, 2}});  // collides: must open a second layer
    const Circuit built = b.take();
    EXPECT_EQ(built.layers.size(), 2u);
    EXPECT_NO_THROW(validate_circuit(built));
}

TEST(Depth, SingleQubitLayersAreFree) {
    CircuitBuilder b(2, Model::QAC0);
    b.add(make_h(0));
    b.add(make_h(1));
    EXPECT_EQ(depth(b.take()), 0);

    CircuitBuilder b2(2, Model::QAC0);
    b2.add(make_h(0));
    b2.add_new_layer(GlobalCZ{{0, 1}});
    b2.add_new_layer(make_h(0));
    EXPECT_EQ(depth(b2.take()), 1);
}

TEST(Depth, FanOutChargesConfiguredConstant) {
    Circuit c = one_gate_circuit(4, FanOut{0, {1, 2, 3}});
    EXPECT_EQ(depth(c, {.c_fanout_depth = 1}), 1);
    EXPECT_EQ(depth(c, {.c_fanout_depth = 3}), 3);
    c.model = Model::QAC0F;
    EXPECT_EQ(depth(c, {.c_fanout_depth = 3}), 1);
}

TEST(Depth, RequiresExpandedMacros) {
    const Circuit c = one_gate_circuit(2, make_cnot(0, 1));
    EXPECT_THROW(depth(c), MacroNotExpanded);
    EXPECT_EQ(depth(expand_macros(c)), 1);
}

TEST(Depth, WeightOracleChargesDeclaredDepth) {
    const Circuit c = one_gate_circuit(3, WeightOracle{WeightOracle::Kind::BitFlip, {0, 1}, 1, 2, 5});
    EXPECT_EQ(depth(c), 5);
}

TEST(Qac0Width, FanOutCapRejectedInQac0Accepted_InQac0f) {
    FanOut wide{0, {}};
    for (QubitId q = 1; q < 16; ++q) wide.targets.push_back(q);
    Circuit c = one_gate_circuit(16, wide, Model::QAC0);
    EXPECT_THROW(validate_circuit(c, {.c_logwidth = 2}), InvalidGate);
    EXPECT_FALSE(fanout_within_qac0_width(c, 2));
    c.model = Model::QAC0F;
    EXPECT_NO_THROW(validate_circuit(c, {.c_logwidth = 2}));
}

TEST(MacroExpansion, TwoQubitToffoliIsHConjugatedCz) {
    const Circuit c = one_gate_circuit(2, make_cnot(0, 1));
    const Circuit e = expand_macros(c);
    ASSERT_EQ(e.layers.size(), 3u);
    EXPECT_TRUE(std::holds_alternative<SingleQubit>(e.layers[0].gates[0]));
    EXPECT_TRUE(std::holds_alternative<GlobalCZ>(e.layers[1].gates[0]));
    EXPECT_LT(mo::max_entry_distance(mo::circuit_matrix(e), mo::circuit_matrix(c)), 1e-12);
}

TEST(MacroExpansion, ReflectionOfAllOnesIsPlainCz) {
    const ProductReflection refl{{{0, {cplx(0), cplx(1)}}, {1, {cplx(0), cplx(1)}}}};
    const Circuit c = one_gate_circuit(2, refl);
    const mo::Matrix expected = mo::gate_matrix(GlobalCZ{{0, 1}}, 2);
    EXPECT_LT(mo::max_entry_distance(mo::circuit_matrix(expand_macros(c)), expected), 1e-12);
}

TEST(MacroExpansion, MixedPolarityToffoliMatchesBruteForceMatrix) {
    // flip q2 iff q0 = 0 and q1 = 1, verified against an explicitly built 8x8
    const Circuit c =
        one_gate_circuit(3, MultiToffoli{{{0, false}, {1, true}}, 2});
    mo::Matrix expected(8, std::vector<cplx>(8, cplx(0)));
    for (std::size_t col = 0; col < 8; ++col) {
        const bool fire = !(col & 1) && (col & 2);
        expected[fire ? (col ^ 4) : col][col] = cplx(1);
    }
    EXPECT_LT(mo::max_entry_distance(mo::circuit_matrix(expand_macros(c)), expected), 1e-12);
}

TEST(MacroExpansion, ExactIncludingGlobalPhaseOnRandomMacros) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        const std::uint32_t n = 2 + trial % 3;
        Gate g;
        if (trial % 2 == 0) {
            MultiToffoli mt;
            for (QubitId q = 0; q + 1 < n; ++q) mt.controls.push_back({q, (rng() & 1) != 0});
            mt.target = n - 1;
            g = mt;
        } else {
            ProductReflection pr;
            for (QubitId q = 0; q < n; ++q) pr.support.push_back({q, random_qubit_state(rng)});
            g = pr;
        }
        const Circuit c = one_gate_circuit(n, g);
        const double dist =
            mo::max_entry_distance(mo::circuit_matrix(expand_macros(c)), mo::gate_matrix(g, n));
        EXPECT_LT(dist, 1e-12);
    }
}

TEST(Compose, SelfInversePrimitivesAndRoundTrip) {
    const Gate cz = GlobalCZ{{0, 1}};
    EXPECT_TRUE(std::holds_alternative<GlobalCZ>(gate_dagger(cz)));
    const Gate f = FanOut{0, {1, 2}};
    EXPECT_TRUE(std::holds_alternative<FanOut>(gate_dagger(f)));

    std::mt19937_64 rng(11);
    CircuitBuilder b(4, Model::QAC0);
    b.add_new_layer(GlobalCZ{{0, 1, 2}});
    b.add_new_layer(FanOut{3, {0, 1}});
    for (int q = 0; q < 4; ++q) b.add(make_ry(q, 0.1 + q));
    b.add_new_layer(MultiToffoli{{{0, true}, {1, false}}, 3});
    const Circuit c = b.take();
    const Circuit round_trip = compose(c, inverse(c));

    StateVector psi = StateVector::zero(4);
    std::normal_distribution<double> dist;
    for (auto& a : psi.amps) a = cplx(dist(rng), dist(rng));
    psi.normalize();
    StateVector moved = psi;
    apply_circuit(moved, round_trip);
    EXPECT_GT(fidelity(psi, moved).value, 1.0 - 1e-12);
}

TEST(Compose, MismatchedQubitCountsThrow) {
    Circuit a, b;
    a.qubit_count = 3;
    b.qubit_count = 4;
    EXPECT_THROW(compose(a, b), CompositionError);
}

TEST(Append, OpensLayerOnConflict) {
    Circuit c;
    c.qubit_count = 3;
    c = append(c, GlobalCZ{{0, 1}}, false);
    c = append(c, GlobalCZ{{2, 0}}, false);  // shares qubit 0
    c = append(c, make_h(1), false);         // fits next to the second CZ
    EXPECT_EQ(c.layers.size(), 2u);
    EXPECT_EQ(c.layers[1].gates.size(), 2u);
}

TEST(ResourceReport, CountsAncillaeFromRoles) {
    Circuit c;
    c.qubit_count = 5;
    c.registers = RegisterMap(5);
    c.registers.set_role(0, Role::System);
    c.registers.set_role(1, Role::System);
    c.registers.set_role(2, Role::Output);
    c.registers.set_role(3, Role::Ancilla);
    c.registers.set_role(4, Role::Flag);
    const ResourceReport rep = resource_report(c);
    EXPECT_EQ(rep.ancilla_count, 2);
    EXPECT_EQ(rep.depth, 0);
}

TEST(Registers, GroupsMustBeDisjoint) {
    RegisterMap regs(4);
    regs.add_group("A", {0, 1});
    EXPECT_THROW(regs.add_group("B", {1, 2}), InvalidRegister);
    EXPECT_THROW(regs.add_group("C", {3, 3}), InvalidRegister);
    regs.add_group("D", {2, 3});
    EXPECT_EQ(regs.group("D").size(), 2u);
}
