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

#include "archive/export.hpp"
#include "archive/licenses.hpp"

namespace {

using namespace archive;

RecordVersion sample_version() {
  RecordVersion v;
  v.record_id = "abcdefghij";
  v.version_id = "abcdefghij-v1";
  v.state = VersionState::shared;
  v.tier = Tier::consortium;
  v.metadata.title = "Impedance spectra <of> sulfide & oxide electrolytes";
  v.metadata.description = "Measurements at 25 C across 40 cells.";
  v.metadata.keywords = {"battery", "electrolyte", "impedance"};
  for (int i = 0; i < 8; ++i) {
    v.metadata.authors.push_back(Author{"Author " + std::to_string(i), std::nullopt, {Affiliation{"Lab", std::nullopt}}});
  }
  v.metadata.license = "CC-BY-4.0";
  v.metadata.publication_date = std::chrono::year{2024} / 3 / 14;
  return v;
}

void BM_Export(benchmark::State& state) {
  static const LicenseRegistry licenses = LicenseRegistry::defaults({});
  const ExportContext ctx{"Consortium Archive", "https://archive.example.org", &licenses};
  const auto v = sample_version();
  const auto format = static_cast<ExportFormat>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(export_version(v, format, ctx));
  state.SetLabel(std::string(to_string(format)));
}
BENCHMARK(BM_Export)->DenseRange(0, 3);

}  // namespace
