// Copyright 2026 The mgtloc Authors.
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
#include <spdlog/spdlog.h>

#include <string>
#include <vector>

#include "mgtloc/adaloc.hpp"
#include "mgtloc/adaloc_train.hpp"
#include "mgtloc/localizer.hpp"
#include "mgtloc/metrics.hpp"
#include "mgtloc/random.hpp"
#include "mgtloc/segmenter.hpp"

namespace {

using namespace mgtloc;

std::string random_text(int sentences, std::uint64_t seed) {
  Rng rng(seed);
  static const char* words[] = {"the", "market", "Mr.", "said", "on", "Tuesday", "that",
                                "prices", "rose", "3.5", "percent", "in", "U.S.", "trading"};
  std::string out;
  for (int s = 0; s < sentences; ++s) {
    out += "Reports";
    const int n = 8 + static_cast<int>(rng.below(20));
    for (int i = 0; i < n; ++i) {
      out += ' ';
      out += words[rng.below(std::size(words))];
    }
    out += rng.bernoulli(0.1) ? ".\n\n" : ". ";
  }
  return out;
}

void BM_Segment(benchmark::State& state) {
  const std::string text = random_text(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(segment(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Segment)->Arg(40)->Arg(400);

void BM_AveragePrecision(benchmark::State& state) {
  Rng rng(2);
  std::vector<ScoredLabel> pairs(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pairs) p = {rng.uniform(), rng.bernoulli(0.3) ? 1 : 0};
  for (auto _ : state) benchmark::DoNotOptimize(average_precision(pairs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AveragePrecision)->Arg(1000)->Arg(100000);

void BM_VoteAggregation(benchmark::State& state) {
  const int n = 40;
  const int m = static_cast<int>(state.range(0));
  const WindowPlan plan = plan_windows(n, m, 1);
  Rng rng(3);
  std::vector<double> scores(plan.windows.size());
  for (double& s : scores) s = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_window_scores(n, plan, scores, {}));
}
BENCHMARK(BM_VoteAggregation)->Arg(1)->Arg(3)->Arg(5);

void BM_AdalocForward(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const AdaLocModel model = init_weights(3, 4, {dim, dim, 0.1, Activation::kRelu});
  Rng rng(5);
  std::vector<double> feature(static_cast<std::size_t>(dim));
  for (double& f : feature) f = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(adaloc_forward(model, feature));
}
BENCHMARK(BM_AdalocForward)->Arg(256)->Arg(1024);

void BM_AdalocTrainEpoch(benchmark::State& state) {
  const int dim = 256;
  Rng rng(6);
  std::vector<ChunkExample> examples(512);
  for (auto& ex : examples) {
    ex.feature.resize(dim);
    for (double& f : ex.feature) f = rng.normal();
    ex.targets = {rng.bernoulli(0.4) ? 1.0 : 0.0, 0.0, 1.0};
    ex.mask = {1.0, 1.0, 1.0};
  }
  TrainConfig config;
  config.max_epochs = 1;
  config.hidden_dim = dim;
  config.learning_rate = 1e-4;
  for (auto _ : state) benchmark::DoNotOptimize(train(examples, nullptr, config));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(examples.size()));
}
BENCHMARK(BM_AdalocTrainEpoch)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
