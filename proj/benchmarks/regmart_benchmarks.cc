// Copyright 2026 The regmart Authors
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


#include <vector>

#include "benchmark/benchmark.h"
#include "regmart/complexity.h"
#include "regmart/minimax.h"
#include "regmart/mirror_map.h"
#include "regmart/rng.h"
#include "regmart/simulate.h"
#include "regmart/strategies.h"

namespace regmart {
namespace {

FiniteFunctionClass RandomClass(std::size_t m, std::size_t k) {
  CounterRng rng(5, 0);
  std::vector<std::vector<double>> rows(k, std::vector<double>(m));
  for (auto& row : rows) {
    for (double& v : row) v = rng.Uniform(-1.0, 1.0);
  }
  return FiniteFunctionClass::FromRows(m, rows);
}

void BM_SeqRademacherExact(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const auto f = RandomClass(4, 16);
  CounterRng rng(6, 0);
  DyadicTree x = DyadicTree::Constant(depth, 0);
  for (int t = 1; t <= depth; ++t) {
    for (std::uint64_t i = 0; i < DyadicTree::LevelWidth(t); ++i) {
      x.set_node(t, i, rng.UniformInt(4));
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(SeqRademacherExact(f, x));
  }
}
BENCHMARK(BM_SeqRademacherExact)->Arg(8)->Arg(12)->Arg(16);

void BM_MinimaxValue(benchmark::State& state) {
  GameSpec spec;
  spec.f_class = RandomClass(3, 4);
  spec.horizon = static_cast<int>(state.range(0));
  spec.grid = UniformGrid(21);
  spec.b.value = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(MinimaxValue(spec).value);
  }
}
BENCHMARK(BM_MinimaxValue)->Arg(3)->Arg(5)->Arg(7);

void BM_FuzzPathwise(benchmark::State& state) {
  StrategySpec spec;
  spec.kind = state.range(0) == 0 ? StrategyKind::kGradientDescent
                                  : StrategyKind::kAdaptiveOmd;
  FuzzOptions options;
  options.cases = 1000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(FuzzPathwise(spec, options, 1).min_margin);
  }
}
BENCHMARK(BM_FuzzPathwise)->Arg(0)->Arg(1);

void BM_SampleBatch(benchmark::State& state) {
  const auto model = MartingaleModel::ConditionallySymmetric(
      ScaleKind::kCoordinates, 4, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const SampleBatch batch = SampleBatchFor(model, 1000, 2);
    benchmark::DoNotOptimize(
        BanachStatistic(batch, MirrorMap::Euclidean(4)).data());
  }
}
BENCHMARK(BM_SampleBatch)->Arg(8)->Arg(32)->Arg(128);

}  // namespace
}  // namespace regmart

BENCHMARK_MAIN();
