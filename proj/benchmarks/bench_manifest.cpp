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

#include "camino/manifest.hpp"

namespace {

const char* kManifest = R"(kind: Deployment
metadata:
  name: cnf  # set: workload-name
  namespace: default  # set: namespace
spec:
  replicas: 1
  mesh_proxy: false  # set: mesh-proxy
  containers:
    - name: app  # set: container
      image: registry.local/cnf  # set: container
      resources:
        cpu: 1  # set: cpu
        memory: 512Mi  # set: memory
  env:
    qos_level: default  # set: qos
)";

void BM_ManifestParse(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(camino::manifest::parse(kManifest));
  }
}
BENCHMARK(BM_ManifestParse);

void BM_ManifestSerialize(benchmark::State& state) {
  const auto doc = camino::manifest::parse(kManifest);
  for (auto _ : state) {
    benchmark::DoNotOptimize(camino::manifest::serialize(doc));
  }
}
BENCHMARK(BM_ManifestSerialize);

void BM_ManifestBind(benchmark::State& state) {
  const auto doc = camino::manifest::parse(kManifest);
  const std::map<std::string, camino::manifest::ScalarValue> bindings = {
      {"workload-name", std::string("cnf-1")}, {"namespace", std::string("ns-1")},
      {"mesh-proxy", true},                    {"container", std::string("img")},
      {"cpu", std::int64_t{4}},                {"memory", std::string("1Gi")},
      {"qos", std::string("gold")},
  };
  for (auto _ : state) {
    std::set<std::string> resolved;
    std::set<std::string> unresolved;
    benchmark::DoNotOptimize(camino::manifest::bind(doc, bindings, resolved, unresolved));
  }
}
BENCHMARK(BM_ManifestBind);

}  // namespace
