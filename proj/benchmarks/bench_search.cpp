/*
 * Copyright 2026 The Consortium Archive Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include <random>

#include "archive/search_index.hpp"

namespace {

using namespace archive;

void fill_index(SearchIndex& index, int docs) {
  static const std::vector<std::string> words = {"lithium", "sulfide", "cathode", "anode",   "impedance",
                                                 "spectra", "sodium",  "polymer", "solvent", "interface"};
  static const std::vector<std::string> communities = {"consortium", "alpha", "beta", "gamma"};
  std::mt19937_64 rng(3);
  for (int i = 0; i < docs; ++i) {
    IndexDocument d;
    d.record_id = "r" + std::to_string(i);
    d.version_id = d.record_id + "-v1";
    d.title = words[rng() % words.size()] + " " + words[rng() % words.size()] + " measurements";
    d.keywords = {words[rng() % words.size()]};
    d.community = communities[rng() % communities.size()];
    d.tier = d.community == "consortium" ? Tier::consortium : Tier::community;
    d.state = VersionState::shared;
    d.owner = "owner" + std::to_string(i % 17);
    index.upsert(std::move(d));
  }
}

void BM_SearchText(benchmark::State& state) {
  SearchIndex index;
  fill_index(index, static_cast<int>(state.range(0)));
  const Principal reader{"bob", {"consortium", "alpha"}};
  SearchQuery q;
  q.text = "sulfide cathode";
  for (auto _ : state) benchmark::DoNotOptimize(index.search(reader, q));
}
BENCHMARK(BM_SearchText)->Arg(1000)->Arg(20000);

void BM_SearchBrowse(benchmark::State& state) {
  SearchIndex index;
  fill_index(index, static_cast<int>(state.range(0)));
  const Principal reader{"bob", {"consortium", "alpha", "beta", "gamma"}};
  SearchQuery q;
  q.page = 3;
  for (auto _ : state) benchmark::DoNotOptimize(index.search(reader, q));
}
BENCHMARK(BM_SearchBrowse)->Arg(1000)->Arg(20000);

}  // namespace
