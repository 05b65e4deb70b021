#pragma once

#include <cstdint>
#include <string>

#include "qdicke/circuit.hpp"
#include "qdicke/synth_qac0.hpp"

namespace qdicke {

/// Register plan for the M-block pipeline: blocks T_1..T_M (n qubits each),
/// success flags A, selection bits S, output register Q, good-branch flag
/// a_0, tuning ancilla a, weight flag b, plus any work qubits of the chosen
/// CSWAP/oracle realization.
struct BlockLayout {
    int n = 0;
    int k = 0;
    int M = 0;
    std::vector<std::vector<QubitId>> blocks;  // T_1..T_M
    std::vector<QubitId> flags;                // A = a_1..a_M
    std::vector<QubitId> selection;            // S = s_1..s_M
    std::vector<QubitId> output;               // Q
    QubitId good_flag = 0;                     // a_0
    QubitId tuning = 0;                        // a
    QubitId weight_flag = 0;                   // b
    std::vector<QubitId> work;                 // CSWAP copies / tmp matrix
    std::uint32_t total_qubits = 0;

    std::string to_json() const;
};

/// p_good = C(n,k) (k/n)^k (1-k/n)^(n-k): weight-k probability at the
/// maximizing angle sin^2 theta* = k/n.
double p_good(int n, int k);

/// gamma = 1 - (1 - p_good)^M.
double gamma_success(int n, int k, int M);

enum class MMode : std::uint8_t {
    Paper,  // ceil(sqrt(n)), raised until M * p_good >= 1
    Desk,   // smallest M with gamma >= floor (default 0.5)
};
int choose_M(int n, int k, MMode mode, double desk_gamma_floor = 0.5);

/// CSWAP extraction layout in time.
/// Sequential: per (block, qubit) pair, no extra qubits, depth ~ 3nM.
/// Fanout: selection bit fanned across the block, 5 layers per block.
/// Parallel: the ancilla-expansion trick (n*M temporaries), block-parallel.
enum class CswapMode : std::uint8_t { Sequential, Fanout, Parallel };

/// EXACT_k flag realization: Semantic uses the declared-depth WeightOracle
/// gate; CircuitK reuses the explicit QAC0 EXACT_k circuit (k <= 4 only).
enum class OracleImpl : std::uint8_t { Semantic, CircuitK };

struct Qac0fConfig {
    int max_qubits = 24;
    CswapMode cswap = CswapMode::Sequential;
    OracleImpl oracle = OracleImpl::Semantic;
    int oracle_depth = 1;  // declared depth of the semantic weight oracle
    MMode m_mode = MMode::Desk;
    double desk_gamma_floor = 0.5;
};

/// Amplitude re-tuning onto the OAA-exact value.
struct AmplitudeTuning {
    double gamma = 0.0;        // measured/expected Pr[good] before tuning
    double gamma_tilde = 0.0;  // sin^2(pi/(4l+2)) target
    double rotation = 0.0;     // Ry(2*rotation) on the tuning ancilla
    int oaa_rounds = 0;        // l
};

/// Smallest l >= 1 with sin^2(pi/(4l+2)) <= gamma; rotation places amplitude
/// sqrt(gamma_tilde/gamma) on |1>, making Pr[a=1 and b=1] = gamma_tilde.
AmplitudeTuning tune_amplitude(double gamma);

BlockLayout plan_layout(int n, int k, int M, const Qac0fConfig& cfg = {});

/// Stage synthesizers; each appends onto a builder. Exposed individually so
/// tests can exercise the documented per-stage contracts.
void synth_block_init(CircuitBuilder& b, const BlockLayout& layout, const Qac0fConfig& cfg);
void synth_lsb_onehot(CircuitBuilder& b, const BlockLayout& layout);
void synth_cswap_extract(CircuitBuilder& b, const BlockLayout& layout, const Qac0fConfig& cfg);
void synth_good_flag(CircuitBuilder& b, const BlockLayout& layout);

struct Qac0fSynthesis {
    Circuit circuit;        // full pipeline including OAA rounds
    Circuit preparation;    // V: everything before the OAA rounds
    BlockLayout layout;
    AmplitudeTuning tuning;
    ResourceReport report;
};

/// Full arbitrary-weight pipeline: block init -> LSB one-hot -> CSWAP
/// extraction -> good flag -> tuning rotation + EXACT_k flag -> l rounds of
/// oblivious amplitude amplification (winner reflection GlobalCZ{a,b},
/// state reflection V (I - 2|0><0|) V-dagger). Throws ResourceLimit with the
/// layout when the plan exceeds cfg.max_qubits.
Qac0fSynthesis synth_dicke_qac0f(int n, int k, int M, const Qac0fConfig& cfg = {});

}  // namespace qdicke
