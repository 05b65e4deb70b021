#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qdicke/gate.hpp"
#include "qdicke/registers.hpp"

namespace qdicke {

/// Gate model. QAC0: single-qubit + global CZ, fan-out restricted to
/// logarithmic width. QAC0F: unrestricted fan-out.
enum class Model : std::uint8_t { QAC0, QAC0F };

const char* model_name(Model m);

/// One parallel time slice; gate supports are pairwise disjoint (checked on
/// construction/append).
struct Layer {
    std::vector<Gate> gates;
};

/// Immutable-after-construction circuit: ordered layers over a typed qubit
/// register map. Build with the free functions below or CircuitBuilder.
struct Circuit {
    std::uint32_t qubit_count = 0;
    Model model = Model::QAC0;
    RegisterMap registers;
    std::vector<Layer> layers;

    std::size_t gate_count() const;
};

struct DepthOptions {
    /// Depth charged per fan-out layer in QAC0 mode (stands in for the
    /// constant-depth log-width fan-out gadget). QAC0F charges 1.
    int c_fanout_depth = 1;
};

struct ValidateOptions {
    /// QAC0 fan-out legality: |targets| <= c_logwidth * ceil(log2 qubit_count).
    int c_logwidth = 2;
};

/// Structural validation: gate ranges, layer disjointness, QAC0 fan-out
/// width. Throws InvalidGate / LayerConflict.
void validate_circuit(const Circuit& c, const ValidateOptions& opt = {});

/// True when no fan-out exceeds the QAC0 width cap.
bool fanout_within_qac0_width(const Circuit& c, int c_logwidth = 2);

/// Multi-qubit layer count; single-qubit-only layers are free. Macros must
/// be expanded first (throws MacroNotExpanded); WeightOracle is primitive
/// and charges its declared depth.
int depth(const Circuit& c, const DepthOptions& opt = {});

/// Rewrites MultiToffoli and ProductReflection into SingleQubit/GlobalCZ
/// layers, phase-exactly. WeightOracle and primitives pass through.
Circuit expand_macros(const Circuit& c);

/// a then b; registers are taken from a. Throws CompositionError on qubit
/// count mismatch.
Circuit compose(const Circuit& a, const Circuit& b);

/// Reverses layer order and conjugate-transposes every gate.
Circuit inverse(const Circuit& c);

/// Returns c extended by one gate, opening a new layer when `new_layer` or
/// when the gate's support collides with the last layer.
Circuit append(const Circuit& c, const Gate& g, bool new_layer);

/// Mutable builder used by the synthesizers; enforces layer disjointness.
class CircuitBuilder {
  public:
    CircuitBuilder(std::uint32_t qubit_count, Model model);

    /// Appends into the current layer if disjoint, otherwise opens a new one.
    void add(const Gate& g);
    /// Forces a fresh layer before the gate.
    void add_new_layer(const Gate& g);
    /// Closes the current layer; next add() starts a new one.
    void barrier();

    /// Appends every layer of `other` (same qubit count required).
    void append_circuit(const Circuit& other);

    RegisterMap& registers() { return circuit_.registers; }
    std::uint32_t qubit_count() const { return circuit_.qubit_count; }

    Circuit take();

  private:
    Circuit circuit_;
    std::vector<bool> occupied_;  // current-layer support mask
    bool layer_open_ = false;
};

/// Measured resources plus the verification fidelities attached by callers.
struct ResourceReport {
    int depth = 0;
    int ancilla_count = 0;
    std::map<std::string, std::size_t> gate_counts;
    std::vector<std::string> notes;
};

/// Depth (after expansion), ancilla count from the register map, and gate
/// counts by variant for both the macro-level and expanded circuit.
ResourceReport resource_report(const Circuit& c, const DepthOptions& opt = {});

}  // namespace qdicke
