#include "qdicke/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "qdicke/errors.hpp"

namespace qdicke {

StateVector StateVector::zero(std::uint32_t n, int max_qubits) {
    if (static_cast<int>(n) > max_qubits) {
        throw ResourceLimit("statevector allocation", static_cast<int>(n), max_qubits);
    }
    StateVector s;
    s.qubit_count = n;
    s.amps.assign(std::size_t(1) << n, cplx(0));
    s.amps[0] = cplx(1);
    return s;
}

StateVector StateVector::basis(std::uint32_t n, std::uint64_t index, int max_qubits) {
    StateVector s = zero(n, max_qubits);
    s.amps[0] = cplx(0);
    s.amps[index] = cplx(1);
    return s;
}

double StateVector::norm() const {
    double total = 0.0;
    for (const cplx& a : amps) total += std::norm(a);
    return std::sqrt(total);
}

void StateVector::normalize() {
    const double n = norm();
    if (n <= 0.0) throw DimensionError("cannot normalize the zero vector");
    for (cplx& a : amps) a /= n;
}

void StateVector::normalize_global_phase() {
    std::size_t best = 0;
    double best_mag = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double m = std::norm(amps[i]);
        if (m > best_mag) {
            best_mag = m;
            best = i;
        }
    }
    if (best_mag == 0.0) return;
    const cplx phase = amps[best] / std::abs(amps[best]);
    const cplx correction = std::conj(phase);
    for (cplx& a : amps) a *= correction;
}

namespace {

std::uint64_t mask_of(const std::vector<QubitId>& qs) {
    std::uint64_t m = 0;
    for (QubitId q : qs) m |= std::uint64_t(1) << q;
    return m;
}

void apply_single_qubit(StateVector& s, QubitId target, const Mat2& u) {
    const std::size_t bit = std::size_t(1) << target;
    const std::size_t size = s.amps.size();
    cplx* a = s.amps.data();
    const cplx u00 = u[0], u01 = u[1], u10 = u[2], u11 = u[3];
    for (std::size_t base = 0; base < size; base += 2 * bit) {
        for (std::size_t low = 0; low < bit; ++low) {
            const std::size_t i0 = base + low;
            const std::size_t i1 = i0 + bit;
            const cplx a0 = a[i0];
            const cplx a1 = a[i1];
            a[i0] = u00 * a0 + u01 * a1;
            a[i1] = u10 * a0 + u11 * a1;
        }
    }
}

void apply_global_cz(StateVector& s, const std::vector<QubitId>& support) {
    const std::uint64_t mask = mask_of(support);
    const std::size_t size = s.amps.size();
    cplx* a = s.amps.data();
    for (std::size_t i = 0; i < size; ++i) {
        if ((i & mask) == mask) a[i] = -a[i];
    }
}

void apply_fanout(StateVector& s, const FanOut& g) {
    const std::uint64_t cbit = std::uint64_t(1) << g.control;
    const std::uint64_t tmask = mask_of(g.targets);
    const std::uint64_t low = tmask & (~tmask + 1);  // lowest target bit
    const std::size_t size = s.amps.size();
    cplx* a = s.amps.data();
    for (std::size_t i = 0; i < size; ++i) {
        if ((i & cbit) && !(i & low)) std::swap(a[i], a[i ^ tmask]);
    }
}

void apply_multi_toffoli(StateVector& s, const MultiToffoli& g) {
    std::uint64_t pos = 0, neg = 0;
    for (const auto& c : g.controls) {
        (c.positive ? pos : neg) |= std::uint64_t(1) << c.qubit;
    }
    const std::uint64_t tbit = std::uint64_t(1) << g.target;
    const std::size_t size = s.amps.size();
    cplx* a = s.amps.data();
    for (std::size_t i = 0; i < size; ++i) {
        if (!(i & tbit) && (i & pos) == pos && !(i & neg)) std::swap(a[i], a[i | tbit]);
    }
}

void apply_weight_oracle(StateVector& s, const WeightOracle& g) {
    const std::uint64_t mask = mask_of(g.support);
    const std::size_t size = s.amps.size();
    cplx* a = s.amps.data();
    if (g.kind == WeightOracle::Kind::Phase) {
        for (std::size_t i = 0; i < size; ++i) {
            if (std::popcount(i & mask) == g.k) a[i] = -a[i];
        }
    } else {
        const std::uint64_t tbit = std::uint64_t(1) << g.target;
        for (std::size_t i = 0; i < size; ++i) {
            if (!(i & tbit) && std::popcount(i & mask) == g.k) std::swap(a[i], a[i | tbit]);
        }
    }
}

}  // namespace

void apply_gate(StateVector& state, const Gate& g) {
    for (QubitId q : gate_support(g)) {
        if (q >= state.qubit_count) {
            throw InvalidGate("gate touches qubit " + std::to_string(q) + " but state has " +
                              std::to_string(state.qubit_count));
        }
    }
    if (const auto* sq = std::get_if<SingleQubit>(&g)) {
        apply_single_qubit(state, sq->target, sq->u);
    } else if (const auto* cz = std::get_if<GlobalCZ>(&g)) {
        apply_global_cz(state, cz->support);
    } else if (const auto* f = std::get_if<FanOut>(&g)) {
        apply_fanout(state, *f);
    } else if (const auto* mt = std::get_if<MultiToffoli>(&g)) {
        apply_multi_toffoli(state, *mt);
    } else if (const auto* pr = std::get_if<ProductReflection>(&g)) {
        // Executed through its phase-exact expansion: U | GCZ | U-dagger.
        GlobalCZ cz;
        std::vector<std::pair<QubitId, Mat2>> basis_changes;
        for (const auto& factor : pr->support) {
            const cplx a = factor.state[0], b = factor.state[1];
            const Mat2 u = {-b, a, std::conj(a), std::conj(b)};
            basis_changes.emplace_back(factor.qubit, u);
            cz.support.push_back(factor.qubit);
        }
        for (const auto& [q, u] : basis_changes) apply_single_qubit(state, q, u);
        apply_global_cz(state, cz.support);
        for (const auto& [q, u] : basis_changes) apply_single_qubit(state, q, mat2_dagger(u));
    } else if (const auto* w = std::get_if<WeightOracle>(&g)) {
        apply_weight_oracle(state, *w);
    }
}

void apply_circuit(StateVector& state, const Circuit& c) {
    if (state.qubit_count != c.qubit_count) {
        throw DimensionError("apply_circuit: state has " + std::to_string(state.qubit_count) +
                             " qubits, circuit needs " + std::to_string(c.qubit_count));
    }
    for (const auto& layer : c.layers) {
        for (const auto& g : layer.gates) apply_gate(state, g);
    }
}

StateVector run(const Circuit& c, int max_qubits) {
    StateVector s = StateVector::zero(c.qubit_count, max_qubits);
    apply_circuit(s, c);
    return s;
}

FidelityResult fidelity(const StateVector& a, const StateVector& b) {
    if (a.qubit_count != b.qubit_count) {
        throw DimensionError("fidelity: qubit counts differ");
    }
    cplx inner(0);
    for (std::size_t i = 0; i < a.amps.size(); ++i) inner += std::conj(a.amps[i]) * b.amps[i];
    return {std::norm(inner), FidelityResult::Kind::FullState};
}

namespace {

std::uint64_t gather_bits(std::uint64_t idx, const std::vector<QubitId>& qs) {
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < qs.size(); ++j) v |= ((idx >> qs[j]) & 1u) << j;
    return v;
}

}  // namespace

FidelityResult reduced_overlap(const StateVector& state, const std::vector<QubitId>& register_qubits,
                               const StateVector& target) {
    if (target.qubit_count != register_qubits.size()) {
        throw InvalidRegister("reduced_overlap: target size does not match register");
    }
    for (QubitId q : register_qubits) {
        if (q >= state.qubit_count) throw InvalidRegister("reduced_overlap: register out of range");
    }
    std::vector<QubitId> complement;
    const std::uint64_t rmask = mask_of(register_qubits);
    for (QubitId q = 0; q < state.qubit_count; ++q) {
        if (!((rmask >> q) & 1u)) complement.push_back(q);
    }
    std::vector<cplx> acc(std::size_t(1) << complement.size(), cplx(0));
    for (std::size_t i = 0; i < state.amps.size(); ++i) {
        const std::uint64_t v = gather_bits(i, register_qubits);
        const std::uint64_t w = gather_bits(i, complement);
        acc[w] += std::conj(target.amps[v]) * state.amps[i];
    }
    double value = 0.0;
    for (const cplx& c : acc) value += std::norm(c);
    return {value, FidelityResult::Kind::ReducedRegister};
}

std::map<std::uint64_t, double> register_distribution(const StateVector& state,
                                                      const std::vector<QubitId>& register_qubits) {
    for (QubitId q : register_qubits) {
        if (q >= state.qubit_count) throw InvalidRegister("register_distribution: out of range");
    }
    std::vector<double> probs(std::size_t(1) << register_qubits.size(), 0.0);
    for (std::size_t i = 0; i < state.amps.size(); ++i) {
        probs[gather_bits(i, register_qubits)] += std::norm(state.amps[i]);
    }
    std::map<std::uint64_t, double> out;
    for (std::size_t v = 0; v < probs.size(); ++v) {
        if (probs[v] > 0.0) out[v] = probs[v];
    }
    return out;
}

double prob_all_zero(const StateVector& state, const std::vector<QubitId>& register_qubits) {
    const std::uint64_t mask = mask_of(register_qubits);
    double p = 0.0;
    for (std::size_t i = 0; i < state.amps.size(); ++i) {
        if ((i & mask) == 0) p += std::norm(state.amps[i]);
    }
    return p;
}

FidelityResult conditional_reduced_overlap(const StateVector& state, QubitId flag,
                                           const std::vector<QubitId>& register_qubits,
                                           const StateVector& target, double* condition_prob) {
    if (flag >= state.qubit_count) throw InvalidRegister("conditional flag out of range");
    const std::uint64_t fbit = std::uint64_t(1) << flag;
    StateVector projected = state;
    double p = 0.0;
    for (std::size_t i = 0; i < projected.amps.size(); ++i) {
        if (i & fbit) {
            p += std::norm(projected.amps[i]);
        } else {
            projected.amps[i] = cplx(0);
        }
    }
    if (condition_prob) *condition_prob = p;
    if (p <= 0.0) return {0.0, FidelityResult::Kind::ReducedRegister};
    const double scale = 1.0 / std::sqrt(p);
    for (cplx& a : projected.amps) a *= scale;
    return reduced_overlap(projected, register_qubits, target);
}

void dump_amplitudes(const StateVector& state, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error("cannot open '" + path + "' for writing");
    for (const cplx& a : state.amps) {
        const double re = a.real(), im = a.imag();
        std::fwrite(&re, sizeof(double), 1, f);
        std::fwrite(&im, sizeof(double), 1, f);
    }
    std::fclose(f);
}

StateVector load_amplitudes(const std::string& path, std::uint32_t qubit_count) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw Error("cannot open '" + path + "' for reading");
    StateVector s;
    s.qubit_count = qubit_count;
    s.amps.resize(std::size_t(1) << qubit_count);
    for (cplx& a : s.amps) {
        double re = 0, im = 0;
        if (std::fread(&re, sizeof(double), 1, f) != 1 ||
            std::fread(&im, sizeof(double), 1, f) != 1) {
            std::fclose(f);
            throw Error("amplitude file '" + path + "' truncated");
        }
        a = cplx(re, im);
    }
    std::fclose(f);
    return s;
}

}  // namespace qdicke
