// Copyright 2026 The CAMINO Authors
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

#include "camino/monitoring.hpp"
#include "camino/rand.hpp"

namespace {

void seed_plane(camino::monitor::MonitoringPlane& plane, std::size_t samples) {
  camino::SplitMix64 rng(7);
  std::vector<camino::monitor::MetricSample> batch;
  for (std::size_t i = 0; i < samples; ++i) {
    camino::monitor::MetricSample sample;
    sample.name = "usage_cpu";
    sample.labels = {{"edge", "Edge" + std::to_string(rng.uniform(1, 3))},
                     {"deployment_id", "d" + std::to_string(rng.uniform(1, 5))},
                     {"package", "CNF-" + std::to_string(rng.uniform(1, 9))},
                     {"namespace", "ns"}};
    sample.value = rng.uniform01() * 4000.0;
    sample.tick = rng.uniform(0, 499);
    batch.push_back(std::move(sample));
  }
  plane.ingest("Edge1", std::move(batch));
}

void BM_MetricsQuery(benchmark::State& state) {
  camino::monitor::MonitoringPlane plane;
  seed_plane(plane, static_cast<std::size_t>(state.range(0)));
  camino::monitor::MetricQuery query;
  query.metric = "usage_cpu";
  query.aggregation = camino::monitor::Aggregation::Sum;
  query.selectors = {{"deployment_id", "d2"}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(plane.query(query));
  }
}
BENCHMARK(BM_MetricsQuery)->Arg(1000)->Arg(10000);

}  // namespace
