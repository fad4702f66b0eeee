/*
 * Copyright 2026 The Unitsel Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "unitsel/cells.h"
#include "unitsel/datagen.h"
#include "unitsel/informer.h"
#include "unitsel/learner.h"

namespace unitsel {
namespace {

const BenefitVector kDefault{1, -1, -1, -2};

void BM_InformerTable(benchmark::State& state) {
  const ScmConfig c = RandomConfig(static_cast<int>(state.range(0)), 5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(InformerTable(c, kDefault));
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << state.range(0)));
}
BENCHMARK(BM_InformerTable)->Arg(8)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_GenerateObservational(benchmark::State& state) {
  const ScmConfig c = DefaultConfig();
  for (auto _ : state) {
    benchmark::DoNotOptimize(GenerateObservational(state.range(0), 1, c, 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateObservational)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_Aggregate(benchmark::State& state) {
  const auto samples = GenerateExperimental(state.range(0), 1, DefaultConfig(), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Aggregate(samples, Regime::kExperimental, 15));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Aggregate)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_TrainEpoch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  FeatureMatrix x;
  std::vector<double> y;
  for (int i = 0; i < n; ++i) {
    x.push_back(CellKey(static_cast<std::uint32_t>(i * 97 % 32768), 15).bits());
    y.push_back((i % 7) * 0.1 - 0.3);
  }
  Hyperparams hp;
  hp.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(Train(x, y, hp));
}
BENCHMARK(BM_TrainEpoch)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_PredictAll(benchmark::State& state) {
  Hyperparams hp;
  const Mlp lower = InitMlp(15, hp);
  hp.seed = 1;
  const Mlp upper = InitMlp(15, hp);
  for (auto _ : state) benchmark::DoNotOptimize(PredictAll(lower, upper, 15, kDefault));
}
BENCHMARK(BM_PredictAll)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace unitsel

BENCHMARK_MAIN();
