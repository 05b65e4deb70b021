#include "qdicke/gate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qdicke/errors.hpp"

namespace qdicke {

Mat2 mat2_x() { return {cplx(0), cplx(1), cplx(1), cplx(0)}; }
Mat2 mat2_z() { return {cplx(1), cplx(0), cplx(0), cplx(-1)}; }
Mat2 mat2_h() {
    const double s = 1.0 / std::sqrt(2.0);
    return {cplx(s), cplx(s), cplx(s), cplx(-s)};
}

Mat2 mat2_ry(double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    return {cplx(c), cplx(-s), cplx(s), cplx(c)};
}

Mat2 mat2_dagger(const Mat2& u) {
    return {std::conj(u[0]), std::conj(u[2]), std::conj(u[1]), std::conj(u[3])};
}

bool mat2_is_unitary(const Mat2& u, double tol) {
    // U U^dagger == I, entrywise.
    const cplx a = u[0] * std::conj(u[0]) + u[1] * std::conj(u[1]);
    const cplx b = u[0] * std::conj(u[2]) + u[1] * std::conj(u[3]);
    const cplx c = u[2] * std::conj(u[0]) + u[3] * std::conj(u[1]);
    const cplx d = u[2] * std::conj(u[2]) + u[3] * std::conj(u[3]);
    return std::abs(a - 1.0) < tol && std::abs(b) < tol && std::abs(c) < tol &&
           std::abs(d - 1.0) < tol;
}

namespace {

void require_nonempty_unique(const std::vector<QubitId>& qs, const char* what) {
    if (qs.empty()) throw InvalidGate(std::string(what) + " has empty support");
    std::set<QubitId> seen(qs.begin(), qs.end());
    if (seen.size() != qs.size()) throw InvalidGate(std::string(what) + " has duplicate qubits");
}

}  // namespace

std::vector<QubitId> gate_support(const Gate& g) {
    std::vector<QubitId> out;
    std::visit(
        [&](const auto& gate) {
            using T = std::decay_t<decltype(gate)>;
            if constexpr (std::is_same_v<T, SingleQubit>) {
                out = {gate.target};
            } else if constexpr (std::is_same_v<T, GlobalCZ>) {
                out = gate.support;
            } else if constexpr (std::is_same_v<T, FanOut>) {
                out = gate.targets;
                out.push_back(gate.control);
            } else if constexpr (std::is_same_v<T, MultiToffoli>) {
                for (const auto& c : gate.controls) out.push_back(c.qubit);
                out.push_back(gate.target);
            } else if constexpr (std::is_same_v<T, ProductReflection>) {
                for (const auto& f : gate.support) out.push_back(f.qubit);
            } else if constexpr (std::is_same_v<T, WeightOracle>) {
                out = gate.support;
                if (gate.kind == WeightOracle::Kind::BitFlip) out.push_back(gate.target);
            }
        },
        g);
    return out;
}

bool gate_is_macro(const Gate& g) {
    return std::holds_alternative<MultiToffoli>(g) || std::holds_alternative<ProductReflection>(g);
}

bool gate_is_multiqubit(const Gate& g) {
    return std::visit(
        [](const auto& gate) -> bool {
            using T = std::decay_t<decltype(gate)>;
            if constexpr (std::is_same_v<T, SingleQubit>) {
                return false;
            } else if constexpr (std::is_same_v<T, GlobalCZ>) {
                return gate.support.size() >= 2;
            } else {
                return true;
            }
        },
        g);
}

void validate_gate(const Gate& g, std::uint32_t qubit_count) {
    std::visit(
        [&](const auto& gate) {
            using T = std::decay_t<decltype(gate)>;
            if constexpr (std::is_same_v<T, SingleQubit>) {
                if (!mat2_is_unitary(gate.u)) throw InvalidGate("single-qubit matrix not unitary");
            } else if constexpr (std::is_same_v<T, GlobalCZ>) {
                require_nonempty_unique(gate.support, "GlobalCZ");
            } else if constexpr (std::is_same_v<T, FanOut>) {
                require_nonempty_unique(gate.targets, "FanOut");
                if (std::find(gate.targets.begin(), gate.targets.end(), gate.control) !=
                    gate.targets.end()) {
                    throw InvalidGate("FanOut control is among its targets");
                }
            } else if constexpr (std::is_same_v<T, MultiToffoli>) {
                if (gate.controls.empty()) throw InvalidGate("MultiToffoli has no controls");
                std::set<QubitId> seen;
                for (const auto& c : gate.controls) {
                    if (!seen.insert(c.qubit).second)
                        throw InvalidGate("MultiToffoli has duplicate controls");
                }
                if (seen.count(gate.target))
                    throw InvalidGate("MultiToffoli target is among its controls");
            } else if constexpr (std::is_same_v<T, ProductReflection>) {
                if (gate.support.empty()) throw InvalidGate("ProductReflection has empty support");
                std::set<QubitId> seen;
                for (const auto& f : gate.support) {
                    if (!seen.insert(f.qubit).second)
                        throw InvalidGate("ProductReflection has duplicate qubits");
                    const double norm =
                        std::norm(f.state[0]) + std::norm(f.state[1]);
                    if (std::abs(norm - 1.0) > 1e-10)
                        throw InvalidGate("ProductReflection factor not normalized");
                }
            } else if constexpr (std::is_same_v<T, WeightOracle>) {
                require_nonempty_unique(gate.support, "WeightOracle");
                if (gate.k < 0 || gate.k > static_cast<int>(gate.support.size()))
                    throw InvalidGate("WeightOracle k outside [0, |support|]");
                if (gate.kind == WeightOracle::Kind::BitFlip) {
                    if (std::find(gate.support.begin(), gate.support.end(), gate.target) !=
                        gate.support.end()) {
                        throw InvalidGate("WeightOracle target is in its support");
                    }
                }
                if (gate.declared_depth < 0) throw InvalidGate("WeightOracle negative depth");
            }
        },
        g);
    if (qubit_count > 0) {
        for (QubitId q : gate_support(g)) {
            if (q >= qubit_count) {
                throw InvalidGate("gate touches qubit " + std::to_string(q) + " but circuit has " +
                                  std::to_string(qubit_count));
            }
        }
    }
}

Gate gate_dagger(const Gate& g) {
    if (const auto* sq = std::get_if<SingleQubit>(&g)) {
        return SingleQubit{sq->target, mat2_dagger(sq->u)};
    }
    return g;  // all other variants are involutions
}

Gate make_x(QubitId q) { return SingleQubit{q, mat2_x()}; }
Gate make_h(QubitId q) { return SingleQubit{q, mat2_h()}; }
Gate make_z(QubitId q) { return SingleQubit{q, mat2_z()}; }
Gate make_ry(QubitId q, double angle) { return SingleQubit{q, mat2_ry(angle)}; }

Gate make_cnot(QubitId control, QubitId target) {
    return MultiToffoli{{{control, true}}, target};
}

Gate make_toffoli(std::vector<MultiToffoli::Control> controls, QubitId target) {
    return MultiToffoli{std::move(controls), target};
}

std::pair<Gate, Gate> make_or_into(std::vector<MultiToffoli::Control> controls, QubitId target) {
    for (auto& c : controls) c.positive = !c.positive;
    return {MultiToffoli{std::move(controls), target}, make_x(target)};
}

}  // namespace qdicke
