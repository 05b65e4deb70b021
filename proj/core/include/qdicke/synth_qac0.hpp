#pragma once

#include <cstdint>
#include <optional>

#include "qdicke/boolean.hpp"
#include "qdicke/circuit.hpp"

namespace qdicke {

/// Tuned rotation angle for exact amplitude amplification.
struct AngleSolution {
    double theta = 0.0;          // radians, in (0, pi/2)
    double c_target = 0.0;       // sin^2(pi / (4 l + 2))
    int grover_rounds = 0;       // l, minimal with c_target < e^-k
    enum class Branch : std::uint8_t { Increasing, Decreasing } branch = Branch::Increasing;
};

/// How the threshold dynamic program is laid out in time.
///
/// Sequential: one recursion step at a time with aggressive ancilla reuse;
/// smallest qubit footprint, depth grows with ceil(log2 n).
/// Parallel: per-level fan-out copies so every dynamic-program level is a
/// fixed number of layers; depth depends only on k, ancillae grow ~ n log n.
enum class Schedule : std::uint8_t { Sequential, Parallel };

struct SynthesisConfig {
    int max_qubits = 24;
    Schedule schedule = Schedule::Sequential;
    double bisection_tol = 1e-13;
    int c_logwidth = 2;          // QAC0 fan-out width constant
    std::uint64_t seed = 0;      // randomized paths only
};

/// C(n,k) * (sin^2 theta)^k * (cos^2 theta)^(n-k) = |<eta_theta|D^n_k>|^2.
double binomial_overlap(int n, int k, double theta);
/// Same, as a function of s = sin^2 theta.
double binomial_overlap_s(int n, int k, double s);

/// Smallest l >= 1 with sin^2(pi/(4l+2)) < e^-k, and that c value.
struct GroverRounds {
    int rounds = 0;
    double c_target = 0.0;
};
GroverRounds grover_rounds(int k);

/// Bisects the increasing branch theta in (0, arcsin sqrt(k/n)) for
/// binomial_overlap(n,k,theta) == c_target. Requires 0 < c_target < e^-k and
/// k < n; residual below `tol`.
AngleSolution solve_theta(int n, int k, double c_target, double tol = 1e-13);

/// Threshold circuit: output <- TH_k(x), inputs preserved, work ancillae
/// returned to |0> (compute-copy-uncompute). Register roles: inputs System,
/// result Output, everything else Ancilla.
Circuit synth_threshold_circuit(int n, int k, const SynthesisConfig& cfg = {});

/// EXACT_k = TH_k and not TH_{k-1}, sharing one dynamic program across both
/// roots; same preservation contract as synth_threshold_circuit.
Circuit synth_exact_circuit(int n, int k, const SynthesisConfig& cfg = {});

/// compose(bit_circuit, Z on output, inverse(bit_circuit)): acts as
/// diag((-1)^f(x)) on the input register, all ancillae restored.
Circuit phase_oracle(const Circuit& bit_circuit);

struct DickeSynthesis {
    Circuit circuit;
    AngleSolution angles;
    ResourceReport report;
};

/// Constant-weight exact Dicke preparation over global CZ: Ry(2 theta) layer,
/// then `grover_rounds` iterations of [EXACT_k phase oracle; reflection about
/// |eta_theta>]. k = 0 yields the empty circuit; k > n/2 synthesizes weight
/// n-k followed by an X layer. Weight cap min(k, n-k) <= 4.
DickeSynthesis synth_dicke_qac0(int n, int k, const SynthesisConfig& cfg = {});

struct WApproxConfig {
    SynthesisConfig base;
    /// Swap in an ideal EXACT_1 phase gate instead of the gadget-built oracle
    /// (reduces to the exact reduction; used for cross-checks).
    bool perfect_oracle = false;
    /// Keep the t gadget outcomes in distinct ancillae and evaluate them in
    /// parallel from fanned-out input copies (paper's depth-lean variant);
    /// default reuses one outcome qubit sequentially.
    bool parallel_gadgets = false;
};

struct WApproxSynthesis {
    Circuit circuit;
    AngleSolution angles;
    ResourceReport report;
    double family_weighted_error = 0.0;
};

/// Approximate W state with constant ancillae: Ry(2 theta) layer for k = 1,
/// then one Grover iteration whose phase oracle evaluates the family's t
/// gadgets sequentially into a popcount comparator (decision: more than 3t/8
/// accepts). Throws ConfigMismatch unless family.t == choose_t(epsilon/9).
WApproxSynthesis synth_w_approx(int n, double epsilon, const DerandomizedFamily& family,
                                const WApproxConfig& cfg = {});

/// The gadget-pipeline EXACT_1 bit circuit (output bit = threshold decision);
/// exposed for unit tests against repeated_gadget_decision.
Circuit build_approx_exact1_bit(int n, const SubsetFamily& family, const WApproxConfig& cfg = {});

}  // namespace qdicke
