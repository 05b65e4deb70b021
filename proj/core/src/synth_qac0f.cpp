#include "qdicke/synth_qac0f.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qdicke/errors.hpp"

namespace qdicke {

double p_good(int n, int k) {
    if (k < 0 || k > n || n < 1) throw std::invalid_argument("p_good: need 0 <= k <= n");
    return binomial_overlap_s(n, k, double(k) / n);
}

double gamma_success(int n, int k, int M) {
    if (M < 1) throw std::invalid_argument("gamma_success: M must be >= 1");
    return 1.0 - std::pow(1.0 - p_good(n, k), M);
}

int choose_M(int n, int k, MMode mode, double desk_gamma_floor) {
    const double p = p_good(n, k);
    if (mode == MMode::Paper) {
        int M = static_cast<int>(std::ceil(std::sqrt(double(n))));
        while (M * p < 1.0) ++M;
        return M;
    }
    int M = 1;
    while (gamma_success(n, k, M) < desk_gamma_floor) ++M;
    return M;
}

AmplitudeTuning tune_amplitude(double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("tune_amplitude: gamma must lie in (0,1]");
    }
    const double pi = std::acos(-1.0);
    AmplitudeTuning tuning;
    tuning.gamma = gamma;
    int l = 1;
    for (;; ++l) {
        const double s = std::sin(pi / (4.0 * l + 2.0));
        if (s * s <= gamma) {
            tuning.gamma_tilde = s * s;
            tuning.oaa_rounds = l;
            break;
        }
    }
    // amplitude sqrt(gamma_tilde / gamma) on |1>, so Pr[a=1 and b=1] = gamma_tilde
    tuning.rotation = std::asin(std::sqrt(tuning.gamma_tilde / gamma));
    return tuning;
}

std::string BlockLayout::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["k"] = k;
    j["M"] = M;
    j["total_qubits"] = total_qubits;
    for (int i = 0; i < M; ++i) j["T" + std::to_string(i + 1)] = blocks[i];
    j["A"] = flags;
    j["S"] = selection;
    j["Q"] = output;
    j["a0"] = good_flag;
    j["a"] = tuning;
    j["b"] = weight_flag;
    j["work"] = work;
    return j.dump();
}

BlockLayout plan_layout(int n, int k, int M, const Qac0fConfig& cfg) {
    if (n < 1 || k < 1 || k > n) throw std::invalid_argument("plan_layout: need 1 <= k <= n");
    if (M < 1) throw std::invalid_argument("plan_layout: M must be >= 1");
    BlockLayout layout;
    layout.n = n;
    layout.k = k;
    layout.M = M;
    QubitId next = 0;
    for (int i = 0; i < M; ++i) {
        std::vector<QubitId> block(n);
        for (int q = 0; q < n; ++q) block[q] = next++;
        layout.blocks.push_back(std::move(block));
    }
    for (int i = 0; i < M; ++i) layout.flags.push_back(next++);
    for (int i = 0; i < M; ++i) layout.selection.push_back(next++);
    for (int q = 0; q < n; ++q) layout.output.push_back(next++);
    layout.good_flag = next++;
    layout.tuning = next++;
    layout.weight_flag = next++;
    if (cfg.cswap == CswapMode::Fanout) {
        for (int q = 0; q + 1 < n; ++q) layout.work.push_back(next++);
    } else if (cfg.cswap == CswapMode::Parallel) {
        // selection copies (one image per output qubit) plus the swap matrix
        for (int i = 0; i < M * (n - 1); ++i) layout.work.push_back(next++);
        for (int i = 0; i < M * n; ++i) layout.work.push_back(next++);
    }
    if (cfg.oracle == OracleImpl::CircuitK) {
        const Circuit exact = synth_exact_circuit(n, k, SynthesisConfig{.max_qubits = 64});
        const int extra = static_cast<int>(exact.qubit_count) - n - 1;
        for (int i = 0; i < extra; ++i) layout.work.push_back(next++);
    }
    layout.total_qubits = next;
    return layout;
}

namespace {

Circuit remap_circuit(const Circuit& c, const std::vector<QubitId>& to, std::uint32_t new_count) {
    Circuit out;
    out.qubit_count = new_count;
    out.model = c.model;
    out.registers = RegisterMap(new_count);
    for (const auto& layer : c.layers) {
        Layer mapped;
        for (const Gate& g : layer.gates) {
            Gate h = g;
            std::visit(
                [&](auto& gate) {
                    using T = std::decay_t<decltype(gate)>;
                    if constexpr (std::is_same_v<T, SingleQubit>) {
                        gate.target = to[gate.target];
                    } else if constexpr (std::is_same_v<T, GlobalCZ>) {
                        for (auto& q : gate.support) q = to[q];
                    } else if constexpr (std::is_same_v<T, FanOut>) {
                        gate.control = to[gate.control];
                        for (auto& q : gate.targets) q = to[q];
                    } else if constexpr (std::is_same_v<T, MultiToffoli>) {
                        for (auto& ctrl : gate.controls) ctrl.qubit = to[ctrl.qubit];
                        gate.target = to[gate.target];
                    } else if constexpr (std::is_same_v<T, ProductReflection>) {
                        for (auto& f : gate.support) f.qubit = to[f.qubit];
                    } else if constexpr (std::is_same_v<T, WeightOracle>) {
                        for (auto& q : gate.support) q = to[q];
                        if (gate.kind == WeightOracle::Kind::BitFlip) gate.target = to[gate.target];
                    }
                },
                h);
            mapped.gates.push_back(std::move(h));
        }
        out.layers.push_back(std::move(mapped));
    }
    return out;
}

/// EXACT_k written onto `flag` from `support`, per the configured realization.
void add_weight_flag(CircuitBuilder& b, const BlockLayout& layout, const Qac0fConfig& cfg,
                     const std::vector<QubitId>& support, QubitId flag) {
    if (cfg.oracle == OracleImpl::Semantic) {
        b.add(WeightOracle{WeightOracle::Kind::BitFlip, support, layout.k, flag,
                           cfg.oracle_depth});
        return;
    }
    const Circuit exact = synth_exact_circuit(layout.n, layout.k, SynthesisConfig{.max_qubits = 64});
    std::vector<QubitId> to(exact.qubit_count);
    for (int q = 0; q < layout.n; ++q) to[q] = support[q];
    to[layout.n] = flag;
    const std::size_t work_offset =
        layout.work.size() - (exact.qubit_count - layout.n - 1);
    for (std::uint32_t q = layout.n + 1; q < exact.qubit_count; ++q) {
        to[q] = layout.work[work_offset + (q - layout.n - 1)];
    }
    b.append_circuit(remap_circuit(exact, to, b.qubit_count()));
}

}  // namespace

void synth_block_init(CircuitBuilder& b, const BlockLayout& layout, const Qac0fConfig& cfg) {
    const double theta_star = std::asin(std::sqrt(double(layout.k) / layout.n));
    b.barrier();
    for (const auto& block : layout.blocks) {
        for (QubitId q : block) b.add(make_ry(q, 2.0 * theta_star));
    }
    b.barrier();
    if (cfg.oracle == OracleImpl::Semantic) {
        for (int i = 0; i < layout.M; ++i) {
            b.add(WeightOracle{WeightOracle::Kind::BitFlip, layout.blocks[i], layout.k,
                               layout.flags[i], cfg.oracle_depth});
        }
    } else {
        for (int i = 0; i < layout.M; ++i) {
            add_weight_flag(b, layout, cfg, layout.blocks[i], layout.flags[i]);
        }
    }
}

void synth_lsb_onehot(CircuitBuilder& b, const BlockLayout& layout) {
    // s_j = a_j and not (a_1 or ... or a_{j-1}): one Toffoli per selection bit
    b.barrier();
    for (int j = 0; j < layout.M; ++j) {
        MultiToffoli mt;
        mt.controls.push_back({layout.flags[j], true});
        for (int i = 0; i < j; ++i) mt.controls.push_back({layout.flags[i], false});
        mt.target = layout.selection[j];
        b.add_new_layer(mt);
    }
}

namespace {

void cswap_via(CircuitBuilder& b, QubitId ctrl, QubitId x, QubitId y, bool fresh_layers) {
    // CSWAP(ctrl; x, y) = CNOT(y,x) . Toffoli(ctrl,x -> y) . CNOT(y,x)
    if (fresh_layers) b.barrier();
    b.add(make_cnot(y, x));
    if (fresh_layers) b.barrier();
    b.add(MultiToffoli{{{ctrl, true}, {x, true}}, y});
    if (fresh_layers) b.barrier();
    b.add(make_cnot(y, x));
}

}  // namespace

void synth_cswap_extract(CircuitBuilder& b, const BlockLayout& layout, const Qac0fConfig& cfg) {
    const int n = layout.n, M = layout.M;
    if (cfg.cswap == CswapMode::Sequential) {
        for (int j = 0; j < M; ++j) {
            for (int q = 0; q < n; ++q) {
                cswap_via(b, layout.selection[j], layout.blocks[j][q], layout.output[q], true);
            }
        }
        return;
    }
    if (cfg.cswap == CswapMode::Fanout) {
        // fan s_j across the block so the n swaps of block j share layers
        for (int j = 0; j < M; ++j) {
            const QubitId s = layout.selection[j];
            std::vector<QubitId> copies(layout.work.begin(), layout.work.begin() + (n - 1));
            auto ctrl = [&](int q) { return q == 0 ? s : copies[q - 1]; };
            if (n > 1) b.add_new_layer(FanOut{s, copies});
            b.barrier();
            for (int q = 0; q < n; ++q) b.add(make_cnot(layout.output[q], layout.blocks[j][q]));
            b.barrier();
            for (int q = 0; q < n; ++q) {
                b.add(MultiToffoli{{{ctrl(q), true}, {layout.blocks[j][q], true}},
                                   layout.output[q]});
            }
            b.barrier();
            for (int q = 0; q < n; ++q) b.add(make_cnot(layout.output[q], layout.blocks[j][q]));
            if (n > 1) b.add_new_layer(FanOut{s, copies});
        }
        return;
    }
    // Parallel: swap every block into its own temporary column, gather the
    // (unique, by one-hotness) live column into Q, then clear the columns
    // against Q. Selection bits are fanned out so all blocks proceed at once.
    std::vector<std::vector<QubitId>> s_copies(M);
    std::vector<std::vector<QubitId>> tmp(M);
    std::size_t w = 0;
    for (int j = 0; j < M; ++j) {
        for (int q = 0; q + 1 < n; ++q) s_copies[j].push_back(layout.work[w++]);
    }
    for (int j = 0; j < M; ++j) {
        for (int q = 0; q < n; ++q) tmp[j].push_back(layout.work[w++]);
    }
    auto ctrl = [&](int j, int q) { return q == 0 ? layout.selection[j] : s_copies[j][q - 1]; };
    b.barrier();
    if (n > 1) {
        for (int j = 0; j < M; ++j) b.add(FanOut{layout.selection[j], s_copies[j]});
    }
    b.barrier();
    for (int j = 0; j < M; ++j) {
        for (int q = 0; q < n; ++q) b.add(make_cnot(tmp[j][q], layout.blocks[j][q]));
    }
    b.barrier();
    for (int j = 0; j < M; ++j) {
        for (int q = 0; q < n; ++q) {
            b.add(MultiToffoli{{{ctrl(j, q), true}, {layout.blocks[j][q], true}}, tmp[j][q]});
        }
    }
    b.barrier();
    for (int j = 0; j < M; ++j) {
        for (int q = 0; q < n; ++q) b.add(make_cnot(tmp[j][q], layout.blocks[j][q]));
    }
    for (int j = 0; j < M; ++j) {
        b.barrier();
        for (int q = 0; q < n; ++q) b.add(make_cnot(tmp[j][q], layout.output[q]));
    }
    for (int j = 0; j < M; ++j) {
        b.barrier();
        for (int q = 0; q < n; ++q) {
            b.add(MultiToffoli{{{ctrl(j, q), true}, {layout.output[q], true}}, tmp[j][q]});
        }
    }
    b.barrier();
    if (n > 1) {
        for (int j = 0; j < M; ++j) b.add(FanOut{layout.selection[j], s_copies[j]});
    }
}

void synth_good_flag(CircuitBuilder& b, const BlockLayout& layout) {
    std::vector<MultiToffoli::Control> args;
    for (QubitId a : layout.flags) args.push_back({a, true});
    auto [mt, x] = make_or_into(args, layout.good_flag);
    b.add_new_layer(mt);
    b.add(x);
}

Qac0fSynthesis synth_dicke_qac0f(int n, int k, int M, const Qac0fConfig& cfg) {
    BlockLayout layout = plan_layout(n, k, M, cfg);
    if (static_cast<int>(layout.total_qubits) > cfg.max_qubits) {
        throw ResourceLimit("qac0f pipeline " + layout.to_json(),
                            static_cast<int>(layout.total_qubits), cfg.max_qubits);
    }

    Qac0fSynthesis out;
    out.layout = layout;
    out.tuning = tune_amplitude(gamma_success(n, k, M));

    CircuitBuilder vb(layout.total_qubits, Model::QAC0F);
    synth_block_init(vb, layout, cfg);
    synth_lsb_onehot(vb, layout);
    synth_cswap_extract(vb, layout, cfg);
    synth_good_flag(vb, layout);
    vb.barrier();
    vb.add(make_ry(layout.tuning, 2.0 * out.tuning.rotation));
    vb.barrier();
    add_weight_flag(vb, layout, cfg, layout.output, layout.weight_flag);
    out.preparation = vb.take();

    CircuitBuilder fb(layout.total_qubits, Model::QAC0F);
    fb.append_circuit(out.preparation);
    const Circuit prep_inverse = inverse(out.preparation);
    std::vector<QubitId> all(layout.total_qubits);
    for (std::uint32_t q = 0; q < layout.total_qubits; ++q) all[q] = q;
    for (int round = 0; round < out.tuning.oaa_rounds; ++round) {
        // winner reflection: phases exactly |1>_a |1>_b
        fb.add_new_layer(GlobalCZ{{layout.tuning, layout.weight_flag}});
        // reflection about the prepared state: V (I - 2|0...0><0...0|) V^dagger
        fb.append_circuit(prep_inverse);
        fb.barrier();
        for (QubitId q : all) fb.add(make_x(q));
        fb.add_new_layer(GlobalCZ{all});
        fb.barrier();
        for (QubitId q : all) fb.add(make_x(q));
        fb.append_circuit(out.preparation);
    }
    out.circuit = fb.take();

    auto assign_registers = [&](Circuit& c) {
        c.registers = RegisterMap(c.qubit_count);
        for (int i = 0; i < M; ++i) {
            for (QubitId q : layout.blocks[i]) c.registers.set_role(q, Role::Block, i);
            c.registers.add_group("T" + std::to_string(i + 1), layout.blocks[i]);
        }
        for (QubitId q : layout.flags) c.registers.set_role(q, Role::Flag);
        for (QubitId q : layout.selection) c.registers.set_role(q, Role::Selection);
        for (QubitId q : layout.output) c.registers.set_role(q, Role::System);
        c.registers.set_role(layout.good_flag, Role::Flag);
        c.registers.set_role(layout.tuning, Role::Ancilla);
        c.registers.set_role(layout.weight_flag, Role::Flag);
        c.registers.add_group("A", layout.flags);
        c.registers.add_group("S", layout.selection);
        c.registers.add_group("Q", layout.output);
        c.registers.add_group("a0", {layout.good_flag});
        c.registers.add_group("a", {layout.tuning});
        c.registers.add_group("b", {layout.weight_flag});
        if (!layout.work.empty()) c.registers.add_group("work", layout.work);
    };
    assign_registers(out.circuit);
    assign_registers(out.preparation);

    out.report = resource_report(out.circuit);
    out.report.notes.push_back("gamma " + std::to_string(out.tuning.gamma) + ", gamma_tilde " +
                               std::to_string(out.tuning.gamma_tilde) + ", oaa_rounds " +
                               std::to_string(out.tuning.oaa_rounds));
    out.report.notes.push_back(
        cfg.oracle == OracleImpl::Semantic
            ? "weight oracle: declared-depth gate (depth " + std::to_string(cfg.oracle_depth) + ")"
            : "weight oracle: explicit circuit realization");
    out.report.notes.push_back(cfg.cswap == CswapMode::Sequential  ? "cswap: sequential"
                               : cfg.cswap == CswapMode::Fanout    ? "cswap: fanout"
                                                                   : "cswap: parallel");
    return out;
}

}  // namespace qdicke
