// Copyright 2026 The qngbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Micro benchmarks for the simulation kernels and one optimizer step per backend.

#include <memory>
#include <random>

#include <benchmark/benchmark.h>

#include "qng/metric.hpp"
#include "qng/noise.hpp"
#include "qng/optimizer.hpp"
#include "qng/rydberg.hpp"

namespace {

using namespace qng;

QaoaParams random_params(int depth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Eigen::VectorXd theta(2 * depth);
  for (auto& v : theta) v = u(rng);
  return QaoaParams(depth, theta);
}

void BM_StatevectorLayer(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  StateVector psi = prepare_plus(n);
  for (auto _ : state) {
    apply_uzz(psi, 0.3);
    apply_umix(psi, 0.7);
    benchmark::DoNotOptimize(psi.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << n));
}
BENCHMARK(BM_StatevectorLayer)->DenseRange(6, 12, 2);

void BM_DensityMatrixLayer(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  DensityMatrix rho = prepare_plus_density(n);
  for (auto _ : state) {
    apply_uzz(rho, 0.3);
    apply_umix(rho, 0.7);
    benchmark::DoNotOptimize(rho.matrix().data());
  }
}
BENCHMARK(BM_DensityMatrixLayer)->DenseRange(4, 10, 2);

void BM_ExactDiagonalize(benchmark::State& state) {
  const TfimSpec spec{static_cast<int>(state.range(0)), 1.0, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(exact_diagonalize(spec).energy);
}
BENCHMARK(BM_ExactDiagonalize)->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);

void BM_NoiselessEvaluate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto kind = static_cast<MetricKind>(state.range(1));
  NoiselessBackend backend(TfimSpec{n, 1.0, 0.5});
  const auto params = random_params(n / 2, 1);
  EvalRequest req;
  req.gradient = true;
  req.metric = kind;
  for (auto _ : state) benchmark::DoNotOptimize(backend.evaluate(params, req).energy);
}
BENCHMARK(BM_NoiselessEvaluate)
    ->ArgsProduct({{4, 8, 12}, {static_cast<int>(MetricKind::kNone), static_cast<int>(MetricKind::kFull)}})
    ->Unit(benchmark::kMicrosecond);

void BM_DigitalNoiseEvaluate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const TfimSpec spec{n, 1.0, 0.5};
  DigitalNoiseBackend backend(spec, CalibrationData::reference(),
                              std::make_shared<const GroundState>(exact_diagonalize(spec)));
  const auto params = random_params(n / 2, 2);
  EvalRequest req;
  req.gradient = true;
  req.metric = MetricKind::kFull;
  for (auto _ : state) benchmark::DoNotOptimize(backend.evaluate(params, req).energy);
}
BENCHMARK(BM_DigitalNoiseEvaluate)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_AnalogEvaluate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int depth = n / 2;
  const TfimSpec spec{n, 1.0, 0.5};
  AnalogBackend backend(spec, AtomRegister::ring(n, spacing_for_interaction(6.0)), CompileOptions{},
                        AnalogNoiseConfig::defaults(), depth, 10, 3,
                        std::make_shared<const GroundState>(exact_diagonalize(spec)));
  const auto params = random_params(depth, 3);
  EvalRequest req;
  req.gradient = true;
  req.metric = MetricKind::kFull;
  for (auto _ : state) benchmark::DoNotOptimize(backend.evaluate(params, req).energy);
}
BENCHMARK(BM_AnalogEvaluate)->DenseRange(4, 6, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
