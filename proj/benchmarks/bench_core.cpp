// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "chargesense/choice.hpp"
#include "chargesense/occupancy.hpp"
#include "chargesense/reproduce.hpp"
#include "chargesense/sensitivity.hpp"
#include "chargesense/simulator.hpp"

namespace cs = chargesense;

namespace {

const cs::Scenario& estimated() {
  static const auto scenario = cs::bundled_fixture("scheme-a-estimated");
  return scenario;
}

void BM_Thresholds(benchmark::State& state) {
  const auto& scheme = estimated().scheme();
  for (auto _ : state) benchmark::DoNotOptimize(cs::thresholds(scheme));
}
BENCHMARK(BM_Thresholds);

void BM_ExpectedOccupancy(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cs::expected_occupancy(estimated()));
}
BENCHMARK(BM_ExpectedOccupancy);

void BM_ExpectedOccupancyMixed(benchmark::State& state) {
  static const auto scenario = cs::bundled_fixture("scheme-b-heterogeneous");
  for (auto _ : state) benchmark::DoNotOptimize(cs::expected_occupancy_mixed(scenario));
}
BENCHMARK(BM_ExpectedOccupancyMixed);

void BM_Sweep(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cs::sweep_impatience_value(estimated(), 1, 0.0, 40.0));
}
BENCHMARK(BM_Sweep);

void BM_Simulate(benchmark::State& state) {
  cs::SimConfig config;
  config.horizon_hours = static_cast<double>(state.range(0));
  config.replications = 1;
  for (auto _ : state) benchmark::DoNotOptimize(cs::simulate(estimated(), config));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 30);
}
BENCHMARK(BM_Simulate)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
