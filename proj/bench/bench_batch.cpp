// Serial reference against the OpenMP kernels. Thread count follows
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "sentinel/batch/sweep.hpp"

using namespace sentinel;

namespace {

std::vector<sim::Scenario> wind_batch(std::size_t n) {
  std::vector<sim::Scenario> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i].kind = sim::ScenarioKind::Wind;
    v[i].seed = i;
    v[i].duration_s = 600.0;
  }
  return v;
}

void BM_RunScenariosSerial(benchmark::State& state) {
  const auto batch = wind_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(batch::run_scenarios_serial(batch, {}, {}));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 6000);
}

void BM_RunScenariosParallel(benchmark::State& state) {
  const auto batch = wind_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(batch::run_scenarios(batch, {}, {}));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 6000);
  state.counters["threads"] = batch::worker_threads();
}

std::vector<imu::RawSample> raw_block(std::size_t n) {
  sim::Scenario sc;
  sc.kind = sim::ScenarioKind::Wind;
  sc.duration_s = static_cast<double>(n) / 10.0;
  return sim::generate(sc, {});
}

void BM_ConvertSerial(benchmark::State& state) {
  const auto raw = raw_block(static_cast<std::size_t>(state.range(0)));
  std::vector<PhysicalSample> out(raw.size());
  for (auto _ : state) {
    batch::convert_all_serial(raw, {}, out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(raw.size()));
}

void BM_ConvertParallel(benchmark::State& state) {
  const auto raw = raw_block(static_cast<std::size_t>(state.range(0)));
  std::vector<PhysicalSample> out(raw.size());
  for (auto _ : state) {
    batch::convert_all(raw, {}, out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(raw.size()));
}

}  // namespace

BENCHMARK(BM_RunScenariosSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunScenariosParallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvertSerial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_ConvertParallel)->Arg(1 << 16)->Arg(1 << 20);

BENCHMARK_MAIN();
