// Copyright 2026 The qlight Authors
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

#include <benchmark/benchmark.h>

#include "qlight/dynamics.hpp"
#include "qlight/measurement.hpp"
#include "qlight/sequences.hpp"
#include "qlight/spectro.hpp"
#include "qlight/tomography.hpp"

namespace qlight {
namespace {

EmitterModel sweet_spot() {
  EmitterModel m;
  m.kappa_c = 2.49 * kTwoPi;
  m.kappa_i = 0.51 * kTwoPi;
  m.transmon = decoherence_rates(TransmonParams{});
  return m;
}

void BM_TimebinEvolution(benchmark::State& state) {
  const EmitterModel m = sweet_spot();
  SequenceTiming timing;
  timing.f0g1_amplitude = calibrate_f0g1_amplitude(m, timing.f0g1_us).amplitude;
  timing.tail_us = 5.0 / m.kappa();
  const Protocol p = timebin_protocol(kPi / 2, state.range(0) != 0, timing);
  const std::vector<CaptureBin> bins = capture_bins(p, m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(DensityMatrix::vacuum(m.emitter_space()), p.sequence, m, bins));
  }
}
BENCHMARK(BM_TimebinEvolution)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_HeterodyneSampling(benchmark::State& state) {
  const Space s({ModeLabel("E", 2), ModeLabel("L", 2)});
  Vector psi = Vector::Zero(4);
  psi(1) = psi(2) = std::sqrt(0.5);
  const DensityMatrix rho = DensityMatrix::pure(s, psi);
  const NoiseModel noise;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_heterodyne(rho, noise, static_cast<std::size_t>(state.range(0)), ++seed));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HeterodyneSampling)->Arg(10000)->Arg(200000)->Unit(benchmark::kMillisecond);

void BM_MomentEstimation(benchmark::State& state) {
  const Space s({ModeLabel("E", 2), ModeLabel("L", 2)});
  Vector psi = Vector::Zero(4);
  psi(1) = psi(2) = std::sqrt(0.5);
  const QuadratureRecord rec = sample_heterodyne(DensityMatrix::pure(s, psi), NoiseModel{}, 200000, 1);
  const std::vector<MomentIndex> indices = moment_indices({1, 1}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_moments(rec, indices));
}
BENCHMARK(BM_MomentEstimation)->Unit(benchmark::kMillisecond);

void BM_S21Fit(benchmark::State& state) {
  ResonanceFit truth;
  truth.fr_ghz = 6.6;
  truth.kappa_i = 0.51 * kTwoPi;
  truth.kappa_c = 2.49 * kTwoPi;
  std::vector<double> grid;
  for (int i = 0; i < 401; ++i) grid.push_back(6.57 + 0.06 * i / 400.0);
  const S21Trace trace = synthesize_trace(truth, grid, 20.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(fit_s21(trace));
}
BENCHMARK(BM_S21Fit)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace qlight
BENCHMARK_MAIN();
