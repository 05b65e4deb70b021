#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "qdicke/registers.hpp"

namespace qdicke {

using cplx = std::complex<double>;

/// 2x2 unitary, row-major: {u00, u01, u10, u11}.
using Mat2 = std::array<cplx, 4>;

Mat2 mat2_x();
Mat2 mat2_z();
Mat2 mat2_h();
/// Ry(angle) = exp(-i * angle * Y / 2); Ry(2*theta)|0> = cos(theta)|0> + sin(theta)|1>.
Mat2 mat2_ry(double angle);
Mat2 mat2_dagger(const Mat2& u);
bool mat2_is_unitary(const Mat2& u, double tol = 1e-12);

/// Arbitrary single-qubit unitary. Depth-0 in both gate models.
struct SingleQubit {
    QubitId target;
    Mat2 u;
};

/// Phases -1 exactly when every qubit of `support` is |1>.
struct GlobalCZ {
    std::vector<QubitId> support;  // non-empty, duplicate-free
};

/// XORs the control bit into every target bit.
struct FanOut {
    QubitId control;
    std::vector<QubitId> targets;  // non-empty, duplicate-free, control excluded
};

/// Macro: flips `target` when every positive control is 1 and every negative
/// control is 0. Expands to an X/H-conjugated GlobalCZ.
struct MultiToffoli {
    struct Control {
        QubitId qubit;
        bool positive;  // false: fires on |0>
    };
    std::vector<Control> controls;  // non-empty, duplicate-free, target excluded
    QubitId target;
};

/// Macro: I - 2|phi><phi| for the product state phi = (x) phi_i over `support`.
/// Expands to single-qubit basis changes around a GlobalCZ, phase-exactly.
struct ProductReflection {
    struct Factor {
        QubitId qubit;
        std::array<cplx, 2> state;  // unit 2-vector |phi_i>
    };
    std::vector<Factor> support;  // non-empty, duplicate-free
};

/// Declared-constant-depth Hamming-weight oracle. Primitive for the
/// simulator (not expandable): the internal realization is out of scope and
/// treated as a black box with `declared_depth` layers.
///
/// BitFlip: target ^= [ |x_support| == k ].  Phase: (-1)^[ |x_support| == k ].
struct WeightOracle {
    enum class Kind : std::uint8_t { BitFlip, Phase };
    Kind kind;
    std::vector<QubitId> support;  // non-empty, duplicate-free
    int k;                         // 0 <= k <= |support|
    QubitId target;                // BitFlip only; ignored for Phase
    int declared_depth = 1;
};

using Gate = std::variant<SingleQubit, GlobalCZ, FanOut, MultiToffoli, ProductReflection, WeightOracle>;

/// Every qubit the gate touches (controls, targets, support).
std::vector<QubitId> gate_support(const Gate& g);

bool gate_is_macro(const Gate& g);
bool gate_is_multiqubit(const Gate& g);

/// Structural validation (unitarity, duplicate-freedom, non-empty supports).
/// Throws InvalidGate. `qubit_count` of 0 skips the range check.
void validate_gate(const Gate& g, std::uint32_t qubit_count = 0);

/// Conjugate transpose. GlobalCZ, FanOut, MultiToffoli, ProductReflection and
/// WeightOracle are self-inverse.
Gate gate_dagger(const Gate& g);

// Convenience constructors used throughout synthesis.
Gate make_x(QubitId q);
Gate make_h(QubitId q);
Gate make_z(QubitId q);
Gate make_ry(QubitId q, double angle);
Gate make_cnot(QubitId control, QubitId target);
Gate make_toffoli(std::vector<MultiToffoli::Control> controls, QubitId target);
/// OR of literals into target: target ^= (c1 | c2 | ...). Realized as a
/// negated all-negative-controls Toffoli, i.e. X(target) MT(!c -> target).
/// Returned as the gate pair {MT, X}.
std::pair<Gate, Gate> make_or_into(std::vector<MultiToffoli::Control> controls, QubitId target);

}  // namespace qdicke
