#include <benchmark/benchmark.h>

#include "tsqw/phase_topology.hpp"
#include "tsqw/rg_flow.hpp"

using namespace tsqw;

static void BM_PhaseDiagramReference(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(phase_diagram_reference(static_cast<int>(st.range(0)), 1024));
}

static void BM_PhaseDiagramSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(phase_diagram(static_cast<int>(st.range(0)), 1024, Execution::Serial));
}

static void BM_PhaseDiagramParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(phase_diagram(static_cast<int>(st.range(0)), 1024, Execution::Parallel));
}

static void BM_FlowPointsSerial(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(classify_flow_points(LineFamily::RedHS, 4000, FlowSource::Numeric, Execution::Serial));
}

static void BM_FlowPointsParallel(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(classify_flow_points(LineFamily::RedHS, 4000, FlowSource::Numeric, Execution::Parallel));
}

BENCHMARK(BM_PhaseDiagramReference)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PhaseDiagramSerial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PhaseDiagramParallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FlowPointsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FlowPointsParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
