#include "qdicke/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qdicke/errors.hpp"

namespace qdicke {

const char* model_name(Model m) { return m == Model::QAC0 ? "qac0" : "qac0f"; }

std::size_t Circuit::gate_count() const {
    std::size_t total = 0;
    for (const auto& layer : layers) total += layer.gates.size();
    return total;
}

namespace {

int qac0_fanout_cap(std::uint32_t qubit_count, int c_logwidth) {
    const int lg = qubit_count <= 1 ? 1 : static_cast<int>(std::ceil(std::log2(double(qubit_count))));
    return c_logwidth * std::max(1, lg);
}

void check_layer_disjoint(const Layer& layer, std::uint32_t qubit_count, std::size_t layer_index) {
    std::set<QubitId> used;
    for (const auto& g : layer.gates) {
        for (QubitId q : gate_support(g)) {
            if (!used.insert(q).second) {
                throw LayerConflict("layer " + std::to_string(layer_index) +
                                    " has overlapping gate supports at qubit " + std::to_string(q));
            }
            (void)qubit_count;
        }
    }
}

}  // namespace

void validate_circuit(const Circuit& c, const ValidateOptions& opt) {
    for (std::size_t li = 0; li < c.layers.size(); ++li) {
        for (const auto& g : c.layers[li].gates) {
            validate_gate(g, c.qubit_count);
            if (c.model == Model::QAC0) {
                if (const auto* f = std::get_if<FanOut>(&g)) {
                    const int cap = qac0_fanout_cap(c.qubit_count, opt.c_logwidth);
                    if (static_cast<int>(f->targets.size()) > cap) {
                        throw InvalidGate("fan-out of width " + std::to_string(f->targets.size()) +
                                          " exceeds the QAC0 cap " + std::to_string(cap));
                    }
                }
            }
        }
        check_layer_disjoint(c.layers[li], c.qubit_count, li);
    }
}

bool fanout_within_qac0_width(const Circuit& c, int c_logwidth) {
    const int cap = qac0_fanout_cap(c.qubit_count, c_logwidth);
    for (const auto& layer : c.layers) {
        for (const auto& g : layer.gates) {
            if (const auto* f = std::get_if<FanOut>(&g)) {
                if (static_cast<int>(f->targets.size()) > cap) return false;
            }
        }
    }
    return true;
}

int depth(const Circuit& c, const DepthOptions& opt) {
    int total = 0;
    for (const auto& layer : c.layers) {
        int contribution = 0;
        for (const auto& g : layer.gates) {
            if (gate_is_macro(g)) {
                throw MacroNotExpanded("depth() requires an expanded circuit");
            }
            int d = 0;
            if (const auto* f = std::get_if<FanOut>(&g)) {
                (void)f;
                d = c.model == Model::QAC0 ? opt.c_fanout_depth : 1;
            } else if (const auto* w = std::get_if<WeightOracle>(&g)) {
                d = w->declared_depth;
            } else if (gate_is_multiqubit(g)) {
                d = 1;
            }
            contribution = std::max(contribution, d);
        }
        total += contribution;
    }
    return total;
}

namespace {

/// Basis change sending |phi> to |1>: U = |0><phi_perp| + |1><phi|.
Mat2 align_to_one(const std::array<cplx, 2>& phi) {
    const cplx a = phi[0], b = phi[1];
    return {-b, a, std::conj(a), std::conj(b)};
}

}  // namespace

Circuit expand_macros(const Circuit& c) {
    Circuit out;
    out.qubit_count = c.qubit_count;
    out.model = c.model;
    out.registers = c.registers;
    for (const auto& layer : c.layers) {
        bool has_macro = false;
        for (const auto& g : layer.gates) {
            if (gate_is_macro(g)) has_macro = true;
        }
        if (!has_macro) {
            out.layers.push_back(layer);
            continue;
        }
        // pre / multi / post structure preserves intra-layer parallelism.
        Layer pre, mid, post;
        for (const auto& g : layer.gates) {
            if (const auto* mt = std::get_if<MultiToffoli>(&g)) {
                if (mt->controls.empty()) throw InvalidGate("MultiToffoli with empty support");
                for (const auto& ctl : mt->controls) {
                    if (!ctl.positive) {
                        pre.gates.push_back(make_x(ctl.qubit));
                        post.gates.push_back(make_x(ctl.qubit));
                    }
                }
                pre.gates.push_back(make_h(mt->target));
                post.gates.push_back(make_h(mt->target));
                GlobalCZ cz;
                for (const auto& ctl : mt->controls) cz.support.push_back(ctl.qubit);
                cz.support.push_back(mt->target);
                mid.gates.push_back(cz);
            } else if (const auto* pr = std::get_if<ProductReflection>(&g)) {
                if (pr->support.empty()) throw InvalidGate("ProductReflection with empty support");
                GlobalCZ cz;
                for (const auto& f : pr->support) {
                    const Mat2 u = align_to_one(f.state);
                    pre.gates.push_back(SingleQubit{f.qubit, u});
                    post.gates.push_back(SingleQubit{f.qubit, mat2_dagger(u)});
                    cz.support.push_back(f.qubit);
                }
                mid.gates.push_back(cz);
            } else {
                mid.gates.push_back(g);
            }
        }
        if (!pre.gates.empty()) out.layers.push_back(std::move(pre));
        out.layers.push_back(std::move(mid));
        if (!post.gates.empty()) out.layers.push_back(std::move(post));
    }
    return out;
}

Circuit compose(const Circuit& a, const Circuit& b) {
    if (a.qubit_count != b.qubit_count) {
        throw CompositionError("compose: qubit counts differ (" + std::to_string(a.qubit_count) +
                               " vs " + std::to_string(b.qubit_count) + ")");
    }
    Circuit out = a;
    out.layers.insert(out.layers.end(), b.layers.begin(), b.layers.end());
    return out;
}

Circuit inverse(const Circuit& c) {
    Circuit out;
    out.qubit_count = c.qubit_count;
    out.model = c.model;
    out.registers = c.registers;
    out.layers.reserve(c.layers.size());
    for (auto it = c.layers.rbegin(); it != c.layers.rend(); ++it) {
        Layer layer;
        layer.gates.reserve(it->gates.size());
        for (const auto& g : it->gates) layer.gates.push_back(gate_dagger(g));
        out.layers.push_back(std::move(layer));
    }
    return out;
}

Circuit append(const Circuit& c, const Gate& g, bool new_layer) {
    validate_gate(g, c.qubit_count);
    Circuit out = c;
    bool fresh = new_layer || out.layers.empty();
    if (!fresh) {
        std::set<QubitId> used;
        for (const auto& existing : out.layers.back().gates) {
            for (QubitId q : gate_support(existing)) used.insert(q);
        }
        for (QubitId q : gate_support(g)) {
            if (used.count(q)) {
                fresh = true;
                break;
            }
        }
    }
    if (fresh) out.layers.emplace_back();
    out.layers.back().gates.push_back(g);
    return out;
}

CircuitBuilder::CircuitBuilder(std::uint32_t qubit_count, Model model)
    : occupied_(qubit_count, false) {
    circuit_.qubit_count = qubit_count;
    circuit_.model = model;
    circuit_.registers = RegisterMap(qubit_count);
}

void CircuitBuilder::add(const Gate& g) {
    validate_gate(g, circuit_.qubit_count);
    const auto support = gate_support(g);
    bool collision = false;
    if (layer_open_) {
        for (QubitId q : support) {
            if (occupied_[q]) {
                collision = true;
                break;
            }
        }
    }
    if (!layer_open_ || collision) {
        circuit_.layers.emplace_back();
        std::fill(occupied_.begin(), occupied_.end(), false);
        layer_open_ = true;
    }
    for (QubitId q : support) occupied_[q] = true;
    circuit_.layers.back().gates.push_back(g);
}

void CircuitBuilder::add_new_layer(const Gate& g) {
    barrier();
    add(g);
}

void CircuitBuilder::barrier() { layer_open_ = false; }

void CircuitBuilder::append_circuit(const Circuit& other) {
    if (other.qubit_count != circuit_.qubit_count) {
        throw CompositionError("append_circuit: qubit counts differ");
    }
    barrier();
    circuit_.layers.insert(circuit_.layers.end(), other.layers.begin(), other.layers.end());
}

Circuit CircuitBuilder::take() {
    layer_open_ = false;
    return std::move(circuit_);
}

namespace {

const char* variant_key(const Gate& g) {
    return std::visit(
        [](const auto& gate) -> const char* {
            using T = std::decay_t<decltype(gate)>;
            if constexpr (std::is_same_v<T, SingleQubit>) return "1q";
            else if constexpr (std::is_same_v<T, GlobalCZ>) return "gcz";
            else if constexpr (std::is_same_v<T, FanOut>) return "fanout";
            else if constexpr (std::is_same_v<T, MultiToffoli>) return "toffoli";
            else if constexpr (std::is_same_v<T, ProductReflection>) return "reflection";
            else return "oracle";
        },
        g);
}

}  // namespace

ResourceReport resource_report(const Circuit& c, const DepthOptions& opt) {
    ResourceReport rep;
    for (const auto& layer : c.layers) {
        for (const auto& g : layer.gates) rep.gate_counts[variant_key(g)]++;
    }
    const Circuit expanded = expand_macros(c);
    rep.depth = depth(expanded, opt);
    rep.ancilla_count = static_cast<int>(c.registers.ancilla_count());
    return rep;
}

}  // namespace qdicke
