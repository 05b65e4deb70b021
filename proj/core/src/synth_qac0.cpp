#include "qdicke/synth_qac0.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>

#include "qdicke/errors.hpp"

namespace qdicke {

double binomial_overlap_s(int n, int k, double s) {
    // log-space binomial to stay finite for large n
    const double log_c = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    if (s <= 0.0) return k == 0 ? std::exp(log_c + (n - k) * std::log1p(-s)) : 0.0;
    if (s >= 1.0) return k == n ? std::exp(log_c + k * std::log(s)) : 0.0;
    return std::exp(log_c + k * std::log(s) + (n - k) * std::log1p(-s));
}

double binomial_overlap(int n, int k, double theta) {
    const double sn = std::sin(theta);
    return binomial_overlap_s(n, k, sn * sn);
}

GroverRounds grover_rounds(int k) {
    if (k < 0) throw std::invalid_argument("grover_rounds: k must be >= 0");
    const double target = std::exp(-double(k));
    const double pi = std::acos(-1.0);
    for (int l = 1;; ++l) {
        const double s = std::sin(pi / (4.0 * l + 2.0));
        if (s * s < target) return {l, s * s};
    }
}

AngleSolution solve_theta(int n, int k, double c_target, double tol) {
    if (k < 1 || k >= n) throw std::invalid_argument("solve_theta: need 1 <= k < n");
    const double max_overlap = binomial_overlap_s(n, k, double(k) / n);
    if (!(c_target > 0.0) || c_target >= max_overlap) {
        throw NoSolution("solve_theta: c_target outside (0, max overlap)");
    }
    // increasing branch: the overlap is monotone on (0, arcsin sqrt(k/n))
    double lo = 0.0;
    double hi = std::asin(std::sqrt(double(k) / n));
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval below float resolution
        if (binomial_overlap(n, k, mid) < c_target) lo = mid;
        else hi = mid;
    }
    AngleSolution sol;
    sol.theta = 0.5 * (lo + hi);
    sol.c_target = c_target;
    sol.branch = AngleSolution::Branch::Increasing;
    const double residual = std::abs(binomial_overlap(n, k, sol.theta) - c_target);
    if (residual > std::max(tol, 1e-12)) {
        throw NoSolution("solve_theta: bisection residual " + std::to_string(residual));
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Threshold dynamic program over subsets of [n], keyed by (element mask, t).
// A node is constant 1 when |S| <= t; t = 0 nodes are NOR leaves; otherwise
//   TH_t(x_S) = AND over splitting bits i of
//     [ TH_0(x_{S_i0}) or TH_0(x_{S_i1}) or OR_{k'} (TH_{k'}(x_{S_i0}) and TH_{t-k'}(x_{S_i1})) ]
// where S_i0 / S_i1 split S by bit i of the element index.
// ---------------------------------------------------------------------------

namespace {

struct DpKey {
    std::uint64_t mask;
    int t;
    bool operator<(const DpKey& o) const { return mask != o.mask ? mask < o.mask : t < o.t; }
    bool operator==(const DpKey& o) const { return mask == o.mask && t == o.t; }
};

struct DpTerm {
    std::optional<DpKey> a;  // absent when folded away as constant 1
    std::optional<DpKey> b;
};

struct DpClause {
    int split_bit = 0;
    DpKey c0{0, 0}, c1{0, 0};  // TH_0 children; sets non-empty, never constant
    std::vector<DpTerm> terms;
};

struct DpNode {
    std::uint64_t mask = 0;
    int t = 0;
    bool leaf = false;
    std::vector<DpClause> clauses;
    int consumers = 0;  // reads excluding the final combine stage
};

struct DpPlan {
    int n = 0;
    int bit_count = 0;
    std::map<DpKey, DpNode> nodes;
    std::vector<DpKey> roots;

    bool is_const(const DpKey& key) const { return std::popcount(key.mask) <= key.t; }
};

int index_bits(int n) {
    return n <= 2 ? 1 : static_cast<int>(std::ceil(std::log2(double(n))));
}

void plan_visit(DpPlan& plan, const DpKey& key, bool count_consumer) {
    if (plan.is_const(key)) return;
    if (auto it = plan.nodes.find(key); it != plan.nodes.end()) {
        if (count_consumer) it->second.consumers++;
        return;
    }
    DpNode node;
    node.mask = key.mask;
    node.t = key.t;
    node.leaf = key.t == 0;
    node.consumers = count_consumer ? 1 : 0;
    plan.nodes.emplace(key, std::move(node));
    if (key.t == 0) return;
    std::vector<DpClause> clauses;
    for (int i = 0; i < plan.bit_count; ++i) {
        std::uint64_t s1 = 0;
        for (int j = 0; j < plan.n; ++j) {
            if (((key.mask >> j) & 1u) && ((j >> i) & 1)) s1 |= std::uint64_t(1) << j;
        }
        const std::uint64_t s0 = key.mask & ~s1;
        if (s0 == 0 || s1 == 0) continue;  // bit i does not split S
        DpClause clause;
        clause.split_bit = i;
        clause.c0 = {s0, 0};
        clause.c1 = {s1, 0};
        plan_visit(plan, clause.c0, true);
        plan_visit(plan, clause.c1, true);
        for (int kp = 1; kp < key.t; ++kp) {
            const DpKey a{s0, kp};
            const DpKey b{s1, key.t - kp};
            DpTerm term;
            if (plan.is_const(a) && plan.is_const(b)) {
                // both sides constant would force |S| <= t, i.e. a const node
                throw Error("threshold plan: unexpected constant term");
            }
            if (!plan.is_const(a)) {
                term.a = a;
                plan_visit(plan, a, true);
            }
            if (!plan.is_const(b)) {
                term.b = b;
                plan_visit(plan, b, true);
            }
            clause.terms.push_back(term);
        }
        clauses.push_back(std::move(clause));
    }
    plan.nodes.at(key).clauses = std::move(clauses);
}

DpPlan build_plan(int n, const std::vector<DpKey>& roots) {
    DpPlan plan;
    plan.n = n;
    plan.bit_count = index_bits(n);
    plan.roots = roots;
    for (const DpKey& r : roots) plan_visit(plan, r, false);
    return plan;
}

std::vector<QubitId> mask_qubits(std::uint64_t mask) {
    std::vector<QubitId> out;
    for (int j = 0; (mask >> j) != 0; ++j) {
        if ((mask >> j) & 1u) out.push_back(static_cast<QubitId>(j));
    }
    return out;
}

std::uint64_t full_mask(int n) { return (std::uint64_t(1) << n) - 1; }

// --- sequential schedule -----------------------------------------------------
//
// One recursion step at a time. Work wires come from a free list; every
// subcomputation is unwound right after its value is consumed, so the live
// footprint tracks the recursion depth rather than the node count (n = 8,
// k <= 3 stays inside a 24-qubit simulator). Unwinding replays the recorded
// gate segment in reverse; all gates involved are self-inverse.

class SeqSynth {
  public:
    SeqSynth(const DpPlan& plan, QubitId first_work) : plan_(plan), next_(first_work) {}

    struct Seg {
        std::size_t begin = 0, end = 0;
        QubitId value = 0;
        bool is_const = false;
    };

    Seg compute(const DpKey& key) {
        Seg seg;
        seg.begin = log_.size();
        if (plan_.is_const(key)) {
            seg.is_const = true;
            seg.end = seg.begin;
            return seg;
        }
        const DpNode& node = plan_.nodes.at(key);
        // Reserve the value wire before anything inside this node allocates:
        // it survives the replay-based unwinding of the clause segments, so
        // it must never alias a wire freed inside them.
        seg.value = alloc();
        if (node.leaf) {
            MultiToffoli nor;
            for (QubitId q : mask_qubits(node.mask)) nor.controls.push_back({q, false});
            nor.target = seg.value;
            push(nor);
            seg.end = log_.size();
            return seg;
        }

        struct ReadItem {
            bool is_and = false;
            Seg child;                  // !is_and
            QubitId wire = 0;           // is_and
            QubitId op_a = 0, op_b = 0;  // is_and
        };

        std::vector<QubitId> clause_wires;
        std::vector<Seg> clause_segs;
        for (const DpClause& clause : node.clauses) {
            Seg cl_seg;
            cl_seg.begin = log_.size();
            // same aliasing rule: the clause wire outlives the unwinding of
            // its own reads below
            cl_seg.value = alloc();
            std::vector<ReadItem> reads;
            std::vector<MultiToffoli::Control> or_args;
            auto add_child = [&](const DpKey& child) {
                Seg s = compute(child);
                reads.push_back({false, s, 0, 0, 0});
                or_args.push_back({s.value, true});
            };
            add_child(clause.c0);
            add_child(clause.c1);
            for (const DpTerm& term : clause.terms) {
                if (term.a && term.b) {
                    Seg sa = compute(*term.a);
                    reads.push_back({false, sa, 0, 0, 0});
                    Seg sb = compute(*term.b);
                    reads.push_back({false, sb, 0, 0, 0});
                    const QubitId w = alloc();
                    push(MultiToffoli{{{sa.value, true}, {sb.value, true}}, w});
                    reads.push_back({true, {}, w, sa.value, sb.value});
                    or_args.push_back({w, true});
                } else {
                    add_child(term.a ? *term.a : *term.b);
                }
            }
            auto [or_mt, or_x] = make_or_into(or_args, cl_seg.value);
            push(or_mt);
            push(or_x);
            // unwind clause reads in reverse construction order
            for (std::size_t i = reads.size(); i-- > 0;) {
                const ReadItem& item = reads[i];
                if (item.is_and) {
                    push(MultiToffoli{{{item.op_a, true}, {item.op_b, true}}, item.wire});
                    free(item.wire);
                } else {
                    undo(item.child);
                }
            }
            cl_seg.end = log_.size();
            clause_wires.push_back(cl_seg.value);
            clause_segs.push_back(cl_seg);
        }
        MultiToffoli all;
        for (QubitId cw : clause_wires) all.controls.push_back({cw, true});
        all.target = seg.value;
        push(all);
        for (std::size_t i = clause_segs.size(); i-- > 0;) undo(clause_segs[i]);
        seg.end = log_.size();
        return seg;
    }

    void undo(const Seg& seg) {
        if (seg.is_const) return;
        for (std::size_t i = seg.end; i-- > seg.begin;) log_.push_back(gate_dagger(log_[i]));
        free(seg.value);
    }

    void push(Gate g) { log_.push_back(std::move(g)); }
    QubitId alloc() {
        if (!free_.empty()) {
            const QubitId q = free_.back();
            free_.pop_back();
            return q;
        }
        return next_++;
    }
    void free(QubitId q) { free_.push_back(q); }

    std::vector<Gate>& log() { return log_; }
    QubitId high_water() const { return next_; }

  private:
    const DpPlan& plan_;
    std::vector<Gate> log_;
    std::vector<QubitId> free_;
    QubitId next_;
};

Circuit assemble_sequential(const std::vector<Gate>& gates, std::uint32_t qubit_count) {
    CircuitBuilder b(qubit_count, Model::QAC0);
    for (const Gate& g : gates) {
        if (gate_is_multiqubit(g)) b.add_new_layer(g);
        else b.add(g);
    }
    return b.take();
}

// --- parallel schedule -------------------------------------------------------
//
// The bottom-up dynamic program with fan-out copies: one copy layer for the
// inputs, one layer of leaf NORs, then per level t a fixed slate of layers
// (AND terms, OR clauses + flips, value ANDs, value distribution). Every
// consumer reads a dedicated copy, so each slate is a single layer and the
// multi-qubit layer count depends only on k. Single-literal AND terms and
// one-clause values still emit width-1 gates so no slate collapses at small n.

class ParSynth {
  public:
    ParSynth(const DpPlan& plan, QubitId first_free) : plan_(plan), next_(first_free) {
        in_copies_.assign(plan.n, {});
        in_used_.assign(plan.n, 0);
        std::vector<int> in_reads(plan.n, 0);
        max_level_ = 0;
        for (const auto& [key, node] : plan_.nodes) {
            max_level_ = std::max(max_level_, node.t);
            if (node.leaf) {
                for (QubitId q : mask_qubits(node.mask)) in_reads[q]++;
            }
        }
        for (int j = 0; j < plan.n; ++j) {
            for (int c = 0; c < in_reads[j]; ++c) in_copies_[j].push_back(fresh());
        }
        for (const auto& [key, node] : plan_.nodes) {
            value_[key] = fresh();
            for (int c = 0; c < node.consumers; ++c) copies_[key].push_back(fresh());
            auto& clause_wires = clause_wire_[key];
            auto& and_wires = and_wire_[key];
            for (std::size_t ci = 0; ci < node.clauses.size(); ++ci) {
                clause_wires.push_back(fresh());
                and_wires.emplace_back();
                for (std::size_t ti = 0; ti < node.clauses[ci].terms.size(); ++ti) {
                    and_wires.back().push_back(fresh());
                }
            }
        }
    }

    /// Compute prefix: copies, leaves, then per-level slates bottom-up.
    Circuit prefix() {
        CircuitBuilder b(next_, Model::QAC0);
        // input copy slate
        b.barrier();
        for (int j = 0; j < plan_.n; ++j) {
            if (in_copies_[j].empty()) continue;
            b.add(FanOut{static_cast<QubitId>(j), in_copies_[j]});
        }
        // leaf slate
        b.barrier();
        for (const auto& [key, node] : plan_.nodes) {
            if (!node.leaf) continue;
            MultiToffoli nor;
            for (QubitId q : mask_qubits(node.mask)) {
                nor.controls.push_back({take_input_copy(q), false});
            }
            nor.target = value_.at(key);
            b.add(nor);
        }
        distribute_level(b, 0);
        for (int t = 1; t <= max_level_; ++t) {
            if (t >= 2) {
                b.barrier();
                for (const auto& [key, node] : plan_.nodes) {
                    if (node.t != t) continue;
                    for (std::size_t ci = 0; ci < node.clauses.size(); ++ci) {
                        const DpClause& clause = node.clauses[ci];
                        for (std::size_t ti = 0; ti < clause.terms.size(); ++ti) {
                            const DpTerm& term = clause.terms[ti];
                            const QubitId w = and_wire_.at(key)[ci][ti];
                            if (term.a && term.b) {
                                b.add(MultiToffoli{
                                    {{take_copy(*term.a), true}, {take_copy(*term.b), true}}, w});
                            } else {
                                // constant side folded; width-1 copy keeps the slate populated
                                b.add(make_cnot(take_copy(term.a ? *term.a : *term.b), w));
                            }
                        }
                    }
                }
            }
            // clause slate: ORs, then their X flips
            b.barrier();
            std::vector<Gate> flips;
            for (const auto& [key, node] : plan_.nodes) {
                if (node.t != t) continue;
                for (std::size_t ci = 0; ci < node.clauses.size(); ++ci) {
                    const DpClause& clause = node.clauses[ci];
                    std::vector<MultiToffoli::Control> args = {{take_copy(clause.c0), true},
                                                               {take_copy(clause.c1), true}};
                    for (std::size_t ti = 0; ti < clause.terms.size(); ++ti) {
                        args.push_back({and_wire_.at(key)[ci][ti], true});
                    }
                    auto [or_mt, or_x] = make_or_into(args, clause_wire_.at(key)[ci]);
                    b.add(or_mt);
                    flips.push_back(or_x);
                }
            }
            b.barrier();
            for (const Gate& g : flips) b.add(g);
            // value slate
            b.barrier();
            for (const auto& [key, node] : plan_.nodes) {
                if (node.t != t) continue;
                MultiToffoli all;
                for (std::size_t ci = 0; ci < node.clauses.size(); ++ci) {
                    all.controls.push_back({clause_wire_.at(key)[ci], true});
                }
                all.target = value_.at(key);
                b.add(all);
            }
            if (t < max_level_) distribute_level(b, t);
        }
        return b.take();
    }

    QubitId value_of(const DpKey& key) const { return value_.at(key); }
    std::uint32_t qubit_count() const { return next_; }

  private:
    void distribute_level(CircuitBuilder& b, int t) {
        b.barrier();
        for (const auto& [key, node] : plan_.nodes) {
            if (node.t != t || node.consumers == 0) continue;
            b.add(FanOut{value_.at(key), copies_.at(key)});
        }
    }

    QubitId fresh() { return next_++; }
    QubitId take_copy(const DpKey& key) {
        const auto& list = copies_.at(key);
        const std::size_t used = copy_used_[key]++;
        if (used >= list.size()) throw Error("parallel threshold plan: copy budget exceeded");
        return list[used];
    }
    QubitId take_input_copy(QubitId j) {
        const std::size_t used = in_used_[j]++;
        if (used >= in_copies_[j].size()) {
            throw Error("parallel threshold plan: input copy budget exceeded");
        }
        return in_copies_[j][used];
    }

    const DpPlan& plan_;
    QubitId next_;
    int max_level_ = 0;
    std::vector<std::vector<QubitId>> in_copies_;
    std::vector<std::size_t> in_used_;
    std::map<DpKey, QubitId> value_;
    std::map<DpKey, std::vector<QubitId>> copies_;
    std::map<DpKey, std::size_t> copy_used_;
    std::map<DpKey, std::vector<QubitId>> clause_wire_;
    std::map<DpKey, std::vector<std::vector<QubitId>>> and_wire_;
};

void set_bit_circuit_registers(Circuit& c, int n) {
    c.registers = RegisterMap(c.qubit_count);
    std::vector<QubitId> inputs;
    for (int j = 0; j < n; ++j) {
        c.registers.set_role(j, Role::System);
        inputs.push_back(j);
    }
    c.registers.set_role(n, Role::Output);
    c.registers.add_group("x", inputs);
    c.registers.add_group("out", {static_cast<QubitId>(n)});
}

/// Shared driver for threshold/EXACT synthesis over one or two DP roots.
/// `combine` receives the root value wires (or constant flags) and the
/// output wire and emits the final write.
Circuit synth_bit_circuit(int n, const std::vector<DpKey>& roots, Schedule schedule,
                          const std::function<std::vector<Gate>(
                              const std::vector<std::optional<QubitId>>&, QubitId)>& combine) {
    const QubitId out = static_cast<QubitId>(n);
    DpPlan plan = build_plan(n, roots);
    Circuit c;
    if (schedule == Schedule::Sequential) {
        SeqSynth synth(plan, out + 1);
        std::vector<SeqSynth::Seg> segs;
        std::vector<std::optional<QubitId>> root_values;
        for (const DpKey& r : roots) {
            SeqSynth::Seg s = synth.compute(r);
            root_values.push_back(s.is_const ? std::nullopt : std::optional<QubitId>(s.value));
            segs.push_back(s);
        }
        for (const Gate& g : combine(root_values, out)) synth.push(g);
        for (std::size_t i = segs.size(); i-- > 0;) synth.undo(segs[i]);
        c = assemble_sequential(synth.log(), synth.high_water());
    } else {
        ParSynth synth(plan, out + 1);
        Circuit prefix = synth.prefix();
        std::vector<std::optional<QubitId>> root_values;
        for (const DpKey& r : roots) {
            root_values.push_back(plan.is_const(r) ? std::nullopt
                                                   : std::optional<QubitId>(synth.value_of(r)));
        }
        CircuitBuilder b(synth.qubit_count(), Model::QAC0);
        b.append_circuit(prefix);
        b.barrier();
        for (const Gate& g : combine(root_values, out)) b.add(g);
        b.append_circuit(inverse(prefix));
        c = b.take();
    }
    set_bit_circuit_registers(c, n);
    return c;
}

void enforce_cap(const Circuit& c, const char* what, int max_qubits) {
    if (static_cast<int>(c.qubit_count) > max_qubits) {
        throw ResourceLimit(what, static_cast<int>(c.qubit_count), max_qubits);
    }
}

}  // namespace

Circuit synth_threshold_circuit(int n, int k, const SynthesisConfig& cfg) {
    if (n < 1 || n > 32) throw std::invalid_argument("synth_threshold_circuit: n outside [1,32]");
    if (k < 0) throw std::invalid_argument("synth_threshold_circuit: k must be >= 0");
    if (k > 4) {
        throw Unsupported(
            "synth_threshold_circuit: weight caps at 4; the amplification-based constructions "
            "need a weight-independent overlap, which fails beyond constant weight");
    }
    Circuit c;
    const QubitId out = static_cast<QubitId>(n);
    if (k >= n) {
        // constant function: |S| <= k always
        CircuitBuilder b(n + 1, Model::QAC0);
        b.add(make_x(out));
        c = b.take();
        set_bit_circuit_registers(c, n);
    } else if (k == 0) {
        CircuitBuilder b(n + 1, Model::QAC0);
        MultiToffoli nor;
        for (int j = 0; j < n; ++j) nor.controls.push_back({static_cast<QubitId>(j), false});
        nor.target = out;
        b.add(nor);
        c = b.take();
        set_bit_circuit_registers(c, n);
    } else {
        c = synth_bit_circuit(
            n, {{full_mask(n), k}}, cfg.schedule,
            [](const std::vector<std::optional<QubitId>>& roots, QubitId out_wire) {
                std::vector<Gate> gates;
                if (roots[0]) gates.push_back(make_cnot(*roots[0], out_wire));
                else gates.push_back(make_x(out_wire));
                return gates;
            });
    }
    enforce_cap(c, "threshold circuit", cfg.max_qubits);
    if (!fanout_within_qac0_width(c, cfg.c_logwidth)) c.model = Model::QAC0F;
    validate_circuit(c, {cfg.c_logwidth});
    return c;
}

Circuit synth_exact_circuit(int n, int k, const SynthesisConfig& cfg) {
    if (n < 1 || n > 32) throw std::invalid_argument("synth_exact_circuit: n outside [1,32]");
    if (k < 0) throw std::invalid_argument("synth_exact_circuit: k must be >= 0");
    if (k > 4 && k <= n) {
        throw Unsupported(
            "synth_exact_circuit: weight caps at 4; the amplification-based constructions "
            "need a weight-independent overlap, which fails beyond constant weight");
    }
    Circuit c;
    const QubitId out = static_cast<QubitId>(n);
    if (k > n) {
        // EXACT_k is identically 0
        c.qubit_count = n + 1;
        c.model = Model::QAC0;
        set_bit_circuit_registers(c, n);
        return c;
    }
    if (k == 0) {
        CircuitBuilder b(n + 1, Model::QAC0);
        MultiToffoli nor;
        for (int j = 0; j < n; ++j) nor.controls.push_back({static_cast<QubitId>(j), false});
        nor.target = out;
        b.add(nor);
        c = b.take();
        set_bit_circuit_registers(c, n);
    } else {
        c = synth_bit_circuit(
            n, {{full_mask(n), k}, {full_mask(n), k - 1}}, cfg.schedule,
            [](const std::vector<std::optional<QubitId>>& roots, QubitId out_wire) {
                // EXACT_k = TH_k and not TH_{k-1}
                std::vector<Gate> gates;
                MultiToffoli mt;
                if (roots[0]) mt.controls.push_back({*roots[0], true});
                if (roots[1]) mt.controls.push_back({*roots[1], false});
                mt.target = out_wire;
                if (mt.controls.empty()) {
                    // TH_k and TH_{k-1} both constant 1: EXACT_k is 0, no gate
                    return gates;
                }
                gates.push_back(mt);
                return gates;
            });
    }
    enforce_cap(c, "exact circuit", cfg.max_qubits);
    if (!fanout_within_qac0_width(c, cfg.c_logwidth)) c.model = Model::QAC0F;
    validate_circuit(c, {cfg.c_logwidth});
    return c;
}

Circuit phase_oracle(const Circuit& bit_circuit) {
    const std::vector<QubitId> outs = bit_circuit.registers.qubits_with_role(Role::Output);
    if (outs.size() != 1) {
        throw InvalidRegister("phase_oracle: bit circuit must have exactly one output qubit");
    }
    Circuit z;
    z.qubit_count = bit_circuit.qubit_count;
    z.model = bit_circuit.model;
    z.layers.push_back(Layer{{make_z(outs[0])}});
    Circuit oracle = compose(compose(bit_circuit, z), inverse(bit_circuit));
    oracle.registers = bit_circuit.registers;
    return oracle;
}

namespace {

Gate eta_reflection(int n, double theta) {
    ProductReflection r;
    const cplx c(std::cos(theta)), s(std::sin(theta));
    for (int j = 0; j < n; ++j) {
        r.support.push_back({static_cast<QubitId>(j), {c, s}});
    }
    return r;
}

void set_dicke_registers(Circuit& c, int n) {
    c.registers = RegisterMap(c.qubit_count);
    std::vector<QubitId> system;
    for (int j = 0; j < n; ++j) {
        c.registers.set_role(j, Role::System);
        system.push_back(j);
    }
    c.registers.add_group("system", system);
}

}  // namespace

DickeSynthesis synth_dicke_qac0(int n, int k, const SynthesisConfig& cfg) {
    if (n < 1) throw std::invalid_argument("synth_dicke_qac0: n must be >= 1");
    if (k < 0 || k > n) throw std::invalid_argument("synth_dicke_qac0: k outside [0, n]");
    if (std::min(k, n - k) > 4) {
        throw Unsupported(
            "synth_dicke_qac0: weight min(k, n-k) caps at 4 in the global-CZ model; the "
            "initial overlap at higher weight shrinks with n, so constant-round exact "
            "amplification no longer applies");
    }
    // Weights are synthesized directly whenever they fit the cap; the X-layer
    // complement only rescues k = n and weights beyond the cap, keeping the
    // depth of a fixed k identical across n.
    const bool flip = k == n || k > 4;
    const int kk = flip ? n - k : k;

    DickeSynthesis out;
    if (kk == 0) {
        CircuitBuilder b(n, Model::QAC0);
        if (flip) {
            for (int j = 0; j < n; ++j) b.add(make_x(j));
        }
        out.circuit = b.take();
        set_dicke_registers(out.circuit, n);
        out.report = resource_report(out.circuit);
        out.report.notes.push_back(flip ? "weight n: X layer on |0...0>" : "weight 0: empty circuit");
        return out;
    }

    const GroverRounds rounds = grover_rounds(kk);
    out.angles = solve_theta(n, kk, rounds.c_target, cfg.bisection_tol);
    out.angles.grover_rounds = rounds.rounds;

    Circuit exact = synth_exact_circuit(n, kk, cfg);
    Circuit oracle = phase_oracle(exact);

    CircuitBuilder b(exact.qubit_count, Model::QAC0);
    for (int j = 0; j < n; ++j) b.add(make_ry(j, 2.0 * out.angles.theta));
    for (int r = 0; r < rounds.rounds; ++r) {
        b.append_circuit(oracle);
        b.add_new_layer(eta_reflection(n, out.angles.theta));
    }
    if (flip) {
        b.barrier();
        for (int j = 0; j < n; ++j) b.add(make_x(j));
    }
    out.circuit = b.take();
    set_dicke_registers(out.circuit, n);
    const bool qac0_legal = fanout_within_qac0_width(out.circuit, cfg.c_logwidth);
    if (!qac0_legal) out.circuit.model = Model::QAC0F;
    out.report = resource_report(out.circuit);
    if (!qac0_legal) {
        out.report.notes.push_back("fan-out width exceeds the QAC0 cap; circuit marked qac0f");
    }
    out.report.notes.push_back(std::string("schedule: ") +
                               (cfg.schedule == Schedule::Sequential ? "sequential" : "parallel"));
    if (flip) {
        out.report.notes.push_back("weight " + std::to_string(k) + " via weight " +
                                   std::to_string(kk) + " plus an X layer");
    }
    return out;
}

// --- approximate W state -----------------------------------------------------

namespace {

struct CounterSpec {
    int bits = 0;
    std::uint64_t init = 0;  // 2^(bits-1) - (threshold+1)
    int threshold = 0;       // accept iff count > threshold
};

CounterSpec counter_spec(int t) {
    CounterSpec spec;
    spec.threshold = 3 * t / 8;
    const int need = std::max(spec.threshold + 1, t - spec.threshold);
    int b = 1;
    while ((1 << (b - 1)) < need) ++b;
    spec.bits = b;
    spec.init = (std::uint64_t(1) << (b - 1)) - std::uint64_t(spec.threshold + 1);
    return spec;
}

void emit_controlled_increment(std::vector<Gate>& gates, QubitId ctrl,
                               const std::vector<QubitId>& counter) {
    for (std::size_t j = counter.size(); j-- > 1;) {
        MultiToffoli mt;
        mt.controls.push_back({ctrl, true});
        for (std::size_t i = 0; i < j; ++i) mt.controls.push_back({counter[i], true});
        mt.target = counter[j];
        gates.push_back(mt);
    }
    gates.push_back(make_cnot(ctrl, counter[0]));
}

// A(x_S) into `target`: 1 iff every bit of S is 0. Empty S is the empty
// conjunction, i.e. constant 1.
void emit_all_zero(std::vector<Gate>& gates, SubsetMask s, QubitId target) {
    if (s == 0) {
        gates.push_back(make_x(target));
        return;
    }
    MultiToffoli mt;
    for (QubitId q : mask_qubits(s)) mt.controls.push_back({q, false});
    mt.target = target;
    gates.push_back(mt);
}

// OR(x_Sbar) into `target`; empty Sbar is the empty disjunction, constant 0.
void emit_any_one(std::vector<Gate>& gates, SubsetMask sbar, QubitId target) {
    if (sbar == 0) return;
    std::vector<MultiToffoli::Control> args;
    for (QubitId q : mask_qubits(sbar)) args.push_back({q, true});
    auto [mt, x] = make_or_into(args, target);
    gates.push_back(mt);
    gates.push_back(x);
}

}  // namespace

Circuit build_approx_exact1_bit(int n, const SubsetFamily& family, const WApproxConfig& cfg) {
    if (static_cast<int>(family.n) != n) {
        throw ConfigMismatch("build_approx_exact1_bit: family drawn for different n");
    }
    const int t = family.t;
    const CounterSpec spec = counter_spec(t);
    const std::uint64_t all = full_mask(n);

    const QubitId out = static_cast<QubitId>(n);
    std::uint32_t next = out + 1;
    std::vector<QubitId> counter(spec.bits);
    std::vector<Gate> prefix_gates;

    if (!cfg.parallel_gadgets) {
        const QubitId a1 = next++, a2 = next++, g = next++;
        for (int b = 0; b < spec.bits; ++b) counter[b] = next++;
        for (int b = 0; b < spec.bits; ++b) {
            if ((spec.init >> b) & 1u) prefix_gates.push_back(make_x(counter[b]));
        }
        for (int i = 0; i < t; ++i) {
            const SubsetMask s = family.subsets[i];
            const SubsetMask sbar = all & ~s;
            std::vector<Gate> gadget;
            emit_all_zero(gadget, s, a1);
            emit_any_one(gadget, sbar, a2);
            gadget.push_back(MultiToffoli{{{a1, true}, {a2, true}}, g});
            for (const Gate& gate : gadget) prefix_gates.push_back(gate);
            emit_controlled_increment(prefix_gates, g, counter);
            // unwind the gadget; outcome lives on in the counter only
            for (std::size_t i2 = gadget.size(); i2-- > 0;) {
                prefix_gates.push_back(gate_dagger(gadget[i2]));
            }
        }
    } else {
        // paper's layout: parallel gadget evaluation into t outcome qubits,
        // reading fanned-out input copies; outcomes then feed the counter
        std::vector<std::vector<QubitId>> in_copies(n);
        for (int j = 0; j < n; ++j) {
            for (int c = 0; c + 1 < t; ++c) in_copies[j].push_back(next++);
        }
        std::vector<QubitId> a1(t), a2(t), y(t);
        for (int i = 0; i < t; ++i) a1[i] = next++;
        for (int i = 0; i < t; ++i) a2[i] = next++;
        for (int i = 0; i < t; ++i) y[i] = next++;
        for (int b = 0; b < spec.bits; ++b) counter[b] = next++;

        auto image = [&](int gadget_index, QubitId j) -> QubitId {
            return gadget_index == 0 ? j : in_copies[j][gadget_index - 1];
        };
        for (int b = 0; b < spec.bits; ++b) {
            if ((spec.init >> b) & 1u) prefix_gates.push_back(make_x(counter[b]));
        }
        if (t > 1) {
            for (int j = 0; j < n; ++j) {
                prefix_gates.push_back(FanOut{static_cast<QubitId>(j), in_copies[j]});
            }
        }
        std::vector<Gate> gadget;
        for (int i = 0; i < t; ++i) {
            const SubsetMask s = family.subsets[i];
            const SubsetMask sbar = all & ~s;
            std::vector<Gate> local;
            SubsetMask rs = 0, rsbar = 0;
            for (QubitId q : mask_qubits(s)) rs |= std::uint64_t(1) << image(i, q);
            for (QubitId q : mask_qubits(sbar)) rsbar |= std::uint64_t(1) << image(i, q);
            emit_all_zero(local, rs, a1[i]);
            emit_any_one(local, rsbar, a2[i]);
            local.push_back(MultiToffoli{{{a1[i], true}, {a2[i], true}}, y[i]});
            for (const Gate& gate : local) gadget.push_back(gate);
        }
        for (const Gate& gate : gadget) prefix_gates.push_back(gate);
        for (int i = 0; i < t; ++i) emit_controlled_increment(prefix_gates, y[i], counter);
        for (std::size_t i = gadget.size(); i-- > 0;) {
            prefix_gates.push_back(gate_dagger(gadget[i]));
        }
        if (t > 1) {
            for (int j = 0; j < n; ++j) {
                prefix_gates.push_back(FanOut{static_cast<QubitId>(j), in_copies[j]});
            }
        }
    }

    CircuitBuilder b(next, Model::QAC0);
    for (const Gate& g : prefix_gates) {
        // parallel layout: greedy packing realizes the gadget-level parallelism
        if (cfg.parallel_gadgets || !gate_is_multiqubit(g)) b.add(g);
        else b.add_new_layer(g);
    }
    Circuit prefix = b.take();
    CircuitBuilder full(next, Model::QAC0);
    full.append_circuit(prefix);
    full.add_new_layer(make_cnot(counter[spec.bits - 1], out));
    full.append_circuit(inverse(prefix));
    Circuit c = full.take();
    set_bit_circuit_registers(c, n);
    return c;
}

WApproxSynthesis synth_w_approx(int n, double epsilon, const DerandomizedFamily& family,
                                const WApproxConfig& cfg) {
    if (n < 2) throw std::invalid_argument("synth_w_approx: n must be >= 2");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("synth_w_approx: epsilon must lie in (0,1)");
    }
    const int expected_t = choose_t(epsilon / 9.0);
    if (family.family.t != expected_t) {
        throw ConfigMismatch("synth_w_approx: family has t = " + std::to_string(family.family.t) +
                             ", but epsilon = " + std::to_string(epsilon) + " needs t = " +
                             std::to_string(expected_t));
    }
    if (static_cast<int>(family.family.n) != n) {
        throw ConfigMismatch("synth_w_approx: family drawn for different n");
    }

    WApproxSynthesis out;
    const GroverRounds rounds = grover_rounds(1);  // one iteration for weight 1
    out.angles = solve_theta(n, 1, rounds.c_target, cfg.base.bisection_tol);
    out.angles.grover_rounds = rounds.rounds;
    out.family_weighted_error = family.weighted_error;

    Circuit bit = build_approx_exact1_bit(n, family.family, cfg);
    enforce_cap(bit, "approximate EXACT_1 circuit", cfg.base.max_qubits);

    CircuitBuilder b(bit.qubit_count, Model::QAC0);
    for (int j = 0; j < n; ++j) b.add(make_ry(j, 2.0 * out.angles.theta));
    for (int r = 0; r < rounds.rounds; ++r) {
        if (cfg.perfect_oracle) {
            std::vector<QubitId> system;
            for (int j = 0; j < n; ++j) system.push_back(j);
            b.add_new_layer(WeightOracle{WeightOracle::Kind::Phase, system, 1, 0, 1});
        } else {
            b.append_circuit(phase_oracle(bit));
        }
        b.add_new_layer(eta_reflection(n, out.angles.theta));
    }
    out.circuit = b.take();
    set_dicke_registers(out.circuit, n);
    out.report = resource_report(out.circuit);
    out.report.notes.push_back("t = " + std::to_string(family.family.t) + ", counter bits = " +
                               std::to_string(counter_spec(family.family.t).bits));
    out.report.notes.push_back("family weighted error " + std::to_string(family.weighted_error));
    if (cfg.parallel_gadgets) out.report.notes.push_back("parallel gadget layout");
    if (cfg.perfect_oracle) out.report.notes.push_back("ideal weight-1 phase gate substituted");
    return out;
}

}  // namespace qdicke
