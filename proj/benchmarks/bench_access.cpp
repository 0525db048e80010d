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

#include "archive/access.hpp"

namespace {

using namespace archive;

void BM_EvaluateMember(benchmark::State& state) {
  Subject reader;
  reader.user = Principal{"bob", {"consortium", "alpha", "beta"}};
  VersionAccess v{"abcdefghij", "alice", VersionState::shared, Tier::community, "alpha"};
  for (auto _ : state) {
    for (auto action : kAllActions) benchmark::DoNotOptimize(evaluate(reader, action, v));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kAllActions.size()));
}
BENCHMARK(BM_EvaluateMember);

void BM_EvaluateLinkFallback(benchmark::State& state) {
  Subject s;
  s.user = Principal{"carol", {"consortium", "beta"}};
  s.link = LinkGrant{"abcdefghij", Capability::read, {}};
  VersionAccess v{"abcdefghij", "alice", VersionState::shared, Tier::community, "alpha"};
  for (auto _ : state) {
    for (auto action : kAllActions) benchmark::DoNotOptimize(evaluate(s, action, v));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kAllActions.size()));
}
BENCHMARK(BM_EvaluateLinkFallback);

}  // namespace
