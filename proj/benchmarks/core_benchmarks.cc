// Copyright 2026 The biphoton-bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <numbers>

#include <benchmark/benchmark.h>

#include "biphoton/biphoton_spectrum.h"
#include "biphoton/coincidence.h"
#include "biphoton/phase_lock.h"
#include "biphoton/quantum_core.h"
#include "biphoton/tomography.h"

namespace biphoton {
namespace {

void BM_GenerateTimetags(benchmark::State& state) {
  const ExperimentScenario sc = reference_scenario(static_cast<double>(state.range(0)), 1);
  std::size_t events = 0;
  for (auto _ : state) {
    const GeneratedStreams g = generate_timetags(sc);
    events = g.stokes.times_ns.size() + g.anti_stokes.times_ns.size();
    benchmark::DoNotOptimize(events);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * events));
}
BENCHMARK(BM_GenerateTimetags)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_CrossCorrelation(benchmark::State& state) {
  const GeneratedStreams g =
      generate_timetags(reference_scenario(static_cast<double>(state.range(0)), 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cross_correlation(g.stokes, g.anti_stokes, 1, -200, 1000));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(
      state.iterations() * (g.stokes.times_ns.size() + g.anti_stokes.times_ns.size())));
}
BENCHMARK(BM_CrossCorrelation)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_MleReconstruct(benchmark::State& state) {
  const ProjectionSet set = standard_projection_set();
  const auto n = sample_counts(
      expected_counts(DensityMatrix::pure(bell_state(BellKind::kPsiPlus)), set,
                      static_cast<double>(state.range(0))),
      3);
  for (auto _ : state) benchmark::DoNotOptimize(mle_reconstruct(n, set));
}
BENCHMARK(BM_MleReconstruct)->Arg(1000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_ChshMax(benchmark::State& state) {
  const DensityMatrix rho = two_path_density(bell_path_config(BellKind::kPhiMinus), 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(chsh_max(rho));
}
BENCHMARK(BM_ChshMax);

void BM_SpectrumToWaveform(benchmark::State& state) {
  const FrequencyGrid grid =
      FrequencyGrid::with_span_mhz(std::size_t{1} << state.range(0), 256.0);
  const BiphotonSpectrum spec = spectrum_for_window(SpectralModelParams{}, 2 * std::numbers::pi * 3e6, grid);
  for (auto _ : state) benchmark::DoNotOptimize(inverse_transform(spec));
}
BENCHMARK(BM_SpectrumToWaveform)->DenseRange(12, 16, 2)->Unit(benchmark::kMicrosecond);

void BM_SimulateLock(benchmark::State& state) {
  LockSimulation sim;
  sim.steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_lock(sim));
}
BENCHMARK(BM_SimulateLock)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace biphoton

BENCHMARK_MAIN();
