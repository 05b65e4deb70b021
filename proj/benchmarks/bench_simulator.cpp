#include <benchmark/benchmark.h>

#include <random>

#include "qdicke/statevector.hpp"
#include "qdicke/synth_qac0.hpp"
#include "qdicke/synth_qac0f.hpp"

using namespace qdicke;

namespace {

StateVector random_state(std::uint32_t n, std::uint64_t seed) {
    StateVector s = StateVector::zero(n, 26);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    for (auto& a : s.amps) a = cplx(dist(rng), dist(rng));
    s.normalize();
    return s;
}

void bench_global_cz(benchmark::State& state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    StateVector s = random_state(n, 1);
    const Gate g = GlobalCZ{{0, n / 2, n - 1}};
    for (auto _ : state) {
        apply_gate(s, g);
        benchmark::DoNotOptimize(s.amps.data());
    }
    state.SetBytesProcessed(int64_t(state.iterations()) * int64_t(s.amps.size() * sizeof(cplx)));
}
BENCHMARK(bench_global_cz)->Arg(16)->Arg(20)->Arg(22);

void bench_fanout(benchmark::State& state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    StateVector s = random_state(n, 2);
    FanOut g{0, {}};
    for (QubitId q = 1; q < n; q += 2) g.targets.push_back(q);
    for (auto _ : state) {
        apply_gate(s, g);
        benchmark::DoNotOptimize(s.amps.data());
    }
    state.SetBytesProcessed(int64_t(state.iterations()) * int64_t(s.amps.size() * sizeof(cplx)));
}
BENCHMARK(bench_fanout)->Arg(16)->Arg(20)->Arg(22);

void bench_single_qubit(benchmark::State& state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    StateVector s = random_state(n, 3);
    const Gate g = make_ry(n / 2, 0.37);
    for (auto _ : state) {
        apply_gate(s, g);
        benchmark::DoNotOptimize(s.amps.data());
    }
    state.SetBytesProcessed(int64_t(state.iterations()) * int64_t(s.amps.size() * sizeof(cplx)));
}
BENCHMARK(bench_single_qubit)->Arg(16)->Arg(20)->Arg(22);

void bench_multi_toffoli(benchmark::State& state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    StateVector s = random_state(n, 4);
    MultiToffoli g;
    for (QubitId q = 0; q + 1 < n && q < 6; ++q) g.controls.push_back({q, q % 2 == 0});
    g.target = n - 1;
    for (auto _ : state) {
        apply_gate(s, Gate{g});
        benchmark::DoNotOptimize(s.amps.data());
    }
    state.SetBytesProcessed(int64_t(state.iterations()) * int64_t(s.amps.size() * sizeof(cplx)));
}
BENCHMARK(bench_multi_toffoli)->Arg(16)->Arg(20)->Arg(22);

void bench_synth_exact(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SynthesisConfig cfg;
    cfg.max_qubits = 64;
    for (auto _ : state) {
        benchmark::DoNotOptimize(synth_exact_circuit(n, 2, cfg).gate_count());
    }
}
BENCHMARK(bench_synth_exact)->Arg(6)->Arg(8)->Arg(10);

void bench_dicke_end_to_end(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const DickeSynthesis synth = synth_dicke_qac0(n, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run(synth.circuit).amps.data());
    }
}
BENCHMARK(bench_dicke_end_to_end)->Arg(4)->Arg(6);

void bench_qac0f_pipeline(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Qac0fSynthesis synth = synth_dicke_qac0f(n, 1, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run(synth.circuit).amps.data());
    }
}
BENCHMARK(bench_qac0f_pipeline)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
