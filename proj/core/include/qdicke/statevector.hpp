#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qdicke/circuit.hpp"

namespace qdicke {

/// Dense statevector over 2^N basis states. Basis convention: bit i of the
/// amplitude index is qubit i (qubit 0 = least significant bit).
struct StateVector {
    std::uint32_t qubit_count = 0;
    std::vector<cplx> amps;

    /// |0...0> on n qubits. Throws ResourceLimit beyond `max_qubits`.
    static StateVector zero(std::uint32_t n, int max_qubits = kDefaultMaxQubits);
    /// Basis state |index> on n qubits.
    static StateVector basis(std::uint32_t n, std::uint64_t index,
                             int max_qubits = kDefaultMaxQubits);

    double norm() const;
    void normalize();

    /// Multiplies by the conjugate phase of the largest-magnitude amplitude,
    /// making that amplitude real positive. Global phase normalization before
    /// sign-sensitive checks.
    void normalize_global_phase();

    static constexpr int kDefaultMaxQubits = 24;
};

struct FidelityResult {
    double value = 0.0;
    enum class Kind : std::uint8_t { FullState, ReducedRegister } kind = Kind::FullState;
};

/// Applies one gate in place. Macro gates (MultiToffoli, ProductReflection,
/// WeightOracle) are executed directly with their exact defining semantics,
/// so macro-level circuits simulate without expansion; equivalence with the
/// expanded path is covered by the matrix-oracle tests.
void apply_gate(StateVector& state, const Gate& g);

/// Applies layers in order (gates within a layer are disjoint, so their
/// order is irrelevant). Throws DimensionError on qubit count mismatch.
void apply_circuit(StateVector& state, const Circuit& c);

/// Runs `c` on |0...0>.
StateVector run(const Circuit& c, int max_qubits = StateVector::kDefaultMaxQubits);

/// |<a|b>|^2. Throws DimensionError on qubit count mismatch.
FidelityResult fidelity(const StateVector& a, const StateVector& b);

/// <target| rho_register |target> where rho_register is the reduced state of
/// `state` on `register_qubits`. Computed by summing |<target (x) e_j|state>|^2
/// over the complement basis; no density matrix is formed.
FidelityResult reduced_overlap(const StateVector& state,
                               const std::vector<QubitId>& register_qubits,
                               const StateVector& target);

/// Marginal probabilities over a register, keyed by bitstring value (bit j of
/// the key is register_qubits[j]).
std::map<std::uint64_t, double> register_distribution(const StateVector& state,
                                                      const std::vector<QubitId>& register_qubits);

/// Probability that every listed qubit measures 0.
double prob_all_zero(const StateVector& state, const std::vector<QubitId>& register_qubits);

/// Projects onto flag=1, renormalizes, then reduced_overlap on `register_qubits`.
/// Probability of the condition is returned through `condition_prob` if given.
FidelityResult conditional_reduced_overlap(const StateVector& state, QubitId flag,
                                           const std::vector<QubitId>& register_qubits,
                                           const StateVector& target,
                                           double* condition_prob = nullptr);

/// Little-endian interleaved re/im doubles; basis index bit i <-> qubit i.
void dump_amplitudes(const StateVector& state, const std::string& path);
StateVector load_amplitudes(const std::string& path, std::uint32_t qubit_count);

}  // namespace qdicke
