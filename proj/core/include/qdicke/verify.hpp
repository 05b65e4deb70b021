#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qdicke/boolean.hpp"
#include "qdicke/circuit.hpp"
#include "qdicke/statevector.hpp"
#include "qdicke/synth_qac0.hpp"

namespace qdicke {

/// Uniform superposition over the weight-k sector of n qubits.
StateVector dicke_state(int n, int k);

struct Verdict {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    double runtime_seconds = 0.0;
    std::string detail;

    std::string to_json() const;
};

/// Checks a bit-computing circuit against a classical oracle on all 2^n
/// basis inputs (ancillae |0>): output bit correct, inputs unchanged, work
/// ancillae restored. Purely classical circuits (X / MultiToffoli / FanOut /
/// bit-write WeightOracle) are propagated as bitmasks; anything else falls
/// back to dense simulation. n <= 12 enforced.
Verdict truth_table_check(const Circuit& circuit, const std::function<int(const BitString&)>& oracle,
                          int n, const std::string& name = "truth_table");

/// Runs the circuit on |0...0> and compares the reduced overlap of the
/// system register with |D^n_k> against `threshold` (1 - 1e-9 for exact
/// modes, 1 - epsilon for the approximate mode).
Verdict dicke_verdict(const Circuit& circuit, int n, int k, const std::vector<QubitId>& system,
                      double threshold, int max_qubits = StateVector::kDefaultMaxQubits);

/// Monte Carlo estimate of the repeated-gadget decision error for
/// representative weights |x| in {0,1,2,3}; asserts error <= e^(-t/64) plus
/// 3 sigma binomial sampling slack per weight.
Verdict gadget_statistics(int n, int t, int trials, std::uint64_t seed);

/// Depth flatness across an n-sweep plus a fitted C * n^(k+1) ancilla
/// envelope. Records the constants; asserts flatness and the envelope, never
/// an asymptotic claim.
struct ResourceSweepPoint {
    int n = 0;
    int depth = 0;
    int ancillae = 0;
};
Verdict resource_verdict(const std::vector<ResourceSweepPoint>& sweep, int k,
                         const std::string& name = "resources");

}  // namespace qdicke
