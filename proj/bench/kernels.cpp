#include <benchmark/benchmark.h>

#include "sandlab/bridge.hpp"
#include "sandlab/sa_engine.hpp"

using namespace sandlab;

namespace {

// Radius 3 after squaring: 9^6 table entries.
const SaRule& collapse2() {
    static const SaRule f = make_collapse(1, 1);
    return f;
}

const CaRule& bridge_n() {
    static const CaRule g = build_ca_from_sa(make_collapse(1, 1));
    return g;
}

const CaRule& bridge_table() {
    static const CaRule g = bridge_n().materialize();
    return g;
}

void BM_iterate(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(iterate_local_rule(collapse2(), 2));
}
void BM_iterate_serial(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(iterate_local_rule_serial(collapse2(), 2));
}

void BM_materialize(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(bridge_n().materialize());
}
void BM_materialize_serial(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(bridge_n().materialize_serial());
}

void BM_invariance(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(check_invariance(bridge_table()));
}
void BM_invariance_serial(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(check_invariance_serial(bridge_table()));
}

}  // namespace

BENCHMARK(BM_iterate)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_iterate_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_materialize)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_materialize_serial)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_invariance)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_invariance_serial)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    bridge_table();  // keep the 2^25 table build out of the timings
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
