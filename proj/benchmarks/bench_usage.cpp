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

#include "archive/crypto.hpp"
#include "archive/usage.hpp"

namespace {

using namespace archive;

void BM_Anonymize(benchmark::State& state) {
  const auto salt = crypto::random_bytes(kSaltBytes);
  const std::string id = "researcher@example.org";
  for (auto _ : state) benchmark::DoNotOptimize(anonymize(id, salt));
}
BENCHMARK(BM_Anonymize);

void BM_CountryLookup(benchmark::State& state) {
  CountryTable table;
  for (int a = 1; a < 224; ++a) table.add(std::to_string(a) + ".0.0.0/8", "DK");
  table.add("2001:db8::/32", "NL");
  for (auto _ : state) {
    benchmark::DoNotOptimize(table.lookup("203.0.113.7"));
    benchmark::DoNotOptimize(table.lookup("2001:db8::1"));
  }
}
BENCHMARK(BM_CountryLookup);

void BM_AggregateEvents(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<UsageEvent> events(static_cast<std::size_t>(state.range(0)));
  for (auto& e : events) {
    e.type = rng() % 3 == 0 ? EventType::download : EventType::view;
    e.visitor_hash = std::to_string(rng() % 500);
    e.period_id = static_cast<std::int64_t>(rng() % 7);
    e.country = "DK";
    e.file_name = "data.csv";
  }
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_events(events));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AggregateEvents)->Arg(1000)->Arg(100000);

}  // namespace
