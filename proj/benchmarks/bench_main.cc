// Copyright 2026 The Trackaudit Authors
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
//
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "benchmark/benchmark.h"
#include "fmt/format.h"
#include "trackaudit/embedder.h"
#include "trackaudit/matcher.h"
#include "trackaudit/mockworld.h"
#include "trackaudit/stats.h"
#include "trackaudit/store.h"

namespace trackaudit {
namespace {

std::string Words(std::mt19937_64& rng, int n) {
  static const char* kVocab[] = {"vaccine", "election", "ballot", "virus", "climate",
                                 "moon",    "secret",   "goal",   "league", "border"};
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += kVocab[rng() % 10];
  }
  return s;
}

void BM_HashEmbed(benchmark::State& state) {
  std::mt19937_64 rng(1);
  HashEmbedder e;
  std::vector<std::string> texts(64);
  for (auto& t : texts) t = Words(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(e.Embed(texts));
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_HashEmbed)->Arg(16)->Arg(128)->Arg(384);

void BM_ScoreVideo(benchmark::State& state) {
  std::mt19937_64 rng(2);
  HashEmbedder e;
  std::vector<ClaimRecord> claims;
  for (int i = 0; i < state.range(0); ++i) {
    claims.push_back({fmt::format("pf-{:05}", i), Words(rng, 20), Verdict::kFalse, {}});
  }
  auto index = *ClaimIndex::Build(claims, e);
  VideoRecord v{"v", Words(rng, 12), "c", 1, Words(rng, 200)};
  for (auto _ : state) benchmark::DoNotOptimize(ScoreVideo(v, index, e));
}
BENCHMARK(BM_ScoreVideo)->Arg(200)->Arg(2000);

void BM_MannWhitney(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u;
  std::vector<double> x(state.range(0)), y(state.range(0));
  for (auto& v : x) v = u(rng);
  for (auto& v : y) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(MannWhitneyU(x, y));
}
BENCHMARK(BM_MannWhitney)->Arg(1000)->Arg(30000);

void BM_RecommendHomepage(benchmark::State& state) {
  WorldConfig w;
  w.effect_size = 0.5;
  w.catalog_size = static_cast<int>(state.range(0));
  auto world = *MockWorld::Create(w);
  (void)world->WatchVideo("p", "sports");
  for (const auto& a : world->MisinformationArticles()) {
    (void)world->ServeArticleVisit("p", a.url, true);
    break;
  }
  for (auto _ : state) benchmark::DoNotOptimize(world->RecommendHomepage("p", 30));
}
BENCHMARK(BM_RecommendHomepage)->Arg(500)->Arg(5000);

// Append cost of one visit record with each durability mode.
void BM_StoreAppend(benchmark::State& state) {
  const auto root = std::filesystem::temp_directory_path() /
                    fmt::format("trackaudit-bench-{}", state.range(0));
  std::filesystem::remove_all(root);
  const auto durability = state.range(0) ? Durability::kFsync : Durability::kFlush;
  auto archive = *RunArchive::Create(root, "bench", Timestamp{}, durability);
  VisitLog v;
  v.puppet_id = "p";
  v.url = "https://example.com/a";
  v.dwell_seconds = 30;
  for (auto _ : state) {
    v.started_at = v.started_at + std::chrono::seconds(60);
    benchmark::DoNotOptimize(archive->Append(v));
  }
  archive.reset();
  std::filesystem::remove_all(root);
}
BENCHMARK(BM_StoreAppend)->Arg(0)->Arg(1)->ArgNames({"fsync"});

}  // namespace
}  // namespace trackaudit

BENCHMARK_MAIN();
