// Copyright 2026 The momreg Authors.
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

#include <benchmark/benchmark.h>

#include <random>

#include "momreg/adaptive.hpp"
#include "momreg/harness.hpp"
#include "momreg/mom.hpp"
#include "momreg/weights.hpp"

namespace {

using namespace momreg;

Dataset uniform_data(std::size_t n, std::size_t d) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u;
  std::vector<double> f(n * d);
  std::vector<double> y(n);
  for (auto& c : f) c = u(rng);
  for (auto& v : y) v = u(rng);
  return Dataset(d, std::move(f), std::move(y));
}

void BM_MomKnn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const Dataset data = uniform_data(n, 2);
  const Point x = {0.5, 0.5};
  const MoMConfig cfg{m, estimator::KNN{8}};
  for (auto _ : state) benchmark::DoNotOptimize(mom_predict(data, x, cfg, 7));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_MomKnn)->Args({4096, 1})->Args({4096, 8})->Args({65536, 8});

void BM_MomMutualNN(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset data = uniform_data(n, 2);
  const Point x = {0.5, 0.5};
  const MoMConfig cfg{4, estimator::MutualNN{4}};
  for (auto _ : state) benchmark::DoNotOptimize(mom_predict(data, x, cfg, 7));
}
BENCHMARK(BM_MomMutualNN)->Arg(256)->Arg(2048);

void BM_BaggedWeights(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bagged_weights_with_replacement(n / 4, n));
    benchmark::DoNotOptimize(bagged_weights_without_replacement(n / 4, n));
  }
}
BENCHMARK(BM_BaggedWeights)->Arg(1024)->Arg(65536);

void BM_AdaptivePredict(benchmark::State& state) {
  const Dataset data = uniform_data(4096, 1);
  const ModelClass model = default_model(1, 1.0, 0.5);
  const Point x = {0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(adaptive_predict(data, x, Family::knn, model, 3).estimate);
  }
}
BENCHMARK(BM_AdaptivePredict);

void BM_TailTrials(benchmark::State& state) {
  ScenarioSpec s;
  s.n = 4096;
  s.noise.sigma = 0.5;
  s.model = default_model(1, 1.0, 0.5);
  s.estimator.delta = std::exp(-3.0);
  TailOptions opt;
  opt.threshold = default_threshold(s);
  opt.trials = 64;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_tail(s, opt).estimate.exceedances);
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_TailTrials)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
