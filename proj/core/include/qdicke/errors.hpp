#pragma once

#include <stdexcept>
#include <string>

namespace qdicke {

/// Base class for everything this library throws on contract violations.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidGate : Error {
    using Error::Error;
};

struct LayerConflict : Error {
    using Error::Error;
};

struct MacroNotExpanded : Error {
    using Error::Error;
};

struct CompositionError : Error {
    using Error::Error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct InvalidRegister : Error {
    using Error::Error;
};

struct NoSolution : Error {
    using Error::Error;
};

struct ConfigMismatch : Error {
    using Error::Error;
};

struct Unsupported : Error {
    using Error::Error;
};

/// Raised before synthesis/simulation when the qubit budget would be blown.
/// Carries the offending estimate so callers can report exact budgets.
struct ResourceLimit : Error {
    ResourceLimit(const std::string& what, int estimated, int cap)
        : Error(what + " (estimated " + std::to_string(estimated) +
                " qubits, cap " + std::to_string(cap) + ")"),
          estimated_qubits(estimated),
          qubit_cap(cap) {}
    int estimated_qubits;
    int qubit_cap;
};

}  // namespace qdicke
