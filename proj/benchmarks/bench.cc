// Copyright 2026 The MCM Toolkit Authors.
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

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "mcm/choice_machine.h"
#include "mcm/provider.h"
#include "mcm/stats.h"
#include "mcm/subspace.h"
#include "mcm/weat.h"

namespace {

using namespace mcm;

std::vector<EmbeddingVector> random_rows(std::size_t n, std::size_t d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  std::vector<EmbeddingVector> rows;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(d);
    for (auto& x : v) x = dist(rng);
    rows.emplace_back(std::move(v));
  }
  return rows;
}

void BM_Cosine(benchmark::State& state) {
  const auto rows = random_rows(2, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(cosine(rows[0], rows[1]));
}
BENCHMARK(BM_Cosine)->Arg(384)->Arg(768);

void BM_HashEmbed(benchmark::State& state) {
  const TextItem item{"Is it okay to kill time with my friends?", TextKind::kSentence};
  for (auto _ : state) benchmark::DoNotOptimize(hash_embed(item, 768, 42));
}
BENCHMARK(BM_HashEmbed);

// The subspace fit: 65 atomic actions in a 768-dimensional space.
void BM_PrincipalComponents(benchmark::State& state) {
  const auto rows = random_rows(static_cast<std::size_t>(state.range(0)), 768, 2);
  for (auto _ : state) benchmark::DoNotOptimize(principal_components(rows));
}
BENCHMARK(BM_PrincipalComponents)->Arg(65)->Arg(121)->Unit(benchmark::kMillisecond);

void BM_PearsonP(benchmark::State& state) {
  double r = 0.0;
  for (auto _ : state) {
    r = r > 0.98 ? 0.01 : r + 0.01;
    benchmark::DoNotOptimize(pearson_p(r, 100));
  }
}
BENCHMARK(BM_PearsonP);

void BM_MoralBias(benchmark::State& state) {
  HashSource source(768, 42);
  const auto tmpl = default_template();
  const ActionQuery action{"kill", "people"};
  for (auto _ : state) benchmark::DoNotOptimize(moral_bias(action, tmpl, source));
}
BENCHMARK(BM_MoralBias)->Unit(benchmark::kMicrosecond);

void BM_ExtractVerbs(benchmark::State& state) {
  HashSource source(256, 42);
  const AssociationSets sets{{"joy", "love", "peace"}, {"hate", "pain", "war"}};
  std::vector<std::string> vocab;
  for (int i = 0; i < state.range(0); ++i) vocab.push_back("verb" + std::to_string(i));
  for (auto _ : state) benchmark::DoNotOptimize(extract_verbs(vocab, source, sets, 10));
}
BENCHMARK(BM_ExtractVerbs)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
