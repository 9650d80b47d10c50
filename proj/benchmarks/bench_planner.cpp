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

#include "camino/planner.hpp"

namespace {

// Chain-of-layers intent: service k depends on every service in layer k-1.
camino::intent::DeploymentIntent layered_intent(int layers, int width) {
  camino::intent::DeploymentIntent intent;
  intent.domain_name = "Domain-X";
  intent.deployment_id = "bench";
  intent.timestamp = "2026-01-01T00:00:00";
  for (int layer = 0; layer < layers; ++layer) {
    for (int i = 0; i < width; ++i) {
      camino::intent::ServiceSpec spec;
      spec.package_name = "svc-" + std::to_string(layer) + "-" + std::to_string(i);
      spec.version = "v1";
      if (layer > 0) {
        for (int j = 0; j < width; ++j) {
          spec.dependencies.push_back({"svc-" + std::to_string(layer - 1) + "-" + std::to_string(j),
                                       "Domain-X", ""});
        }
      }
      intent.services.push_back(std::move(spec));
    }
  }
  return intent;
}

void BM_OrderServices(benchmark::State& state) {
  const auto intent = layered_intent(static_cast<int>(state.range(0)), 4);
  const auto graph = camino::planner::build_graph(intent);
  for (auto _ : state) {
    benchmark::DoNotOptimize(camino::planner::order_services(graph));
  }
}
BENCHMARK(BM_OrderServices)->Arg(4)->Arg(16)->Arg(64);

void BM_PlaceServices(benchmark::State& state) {
  const auto intent = layered_intent(static_cast<int>(state.range(0)), 4);
  std::map<std::string, camino::intent::PackageDescriptor> requirements;
  for (const auto& spec : intent.services) {
    camino::intent::PackageDescriptor descriptor;
    descriptor.name = spec.package_name;
    camino::intent::PackageRequirement requirement;
    requirement.qos = "default";
    requirement.revision = "v1";
    requirement.resources.container = "c";
    requirement.resources.cpu_raw = std::int64_t{1};
    requirement.resources.cpu_millicores = 1000;
    requirement.resources.memory_raw = std::string("128Mi");
    requirement.resources.memory_bytes = 128LL << 20;
    descriptor.requirements.push_back(std::move(requirement));
    requirements[spec.package_name] = std::move(descriptor);
  }
  std::vector<camino::planner::EdgeInventory> inventory;
  for (int i = 0; i < 8; ++i) {
    inventory.push_back({"edge-" + std::to_string(i), 1000 * 1000, 1LL << 40});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(camino::planner::place_services(intent, requirements, inventory));
  }
}
BENCHMARK(BM_PlaceServices)->Arg(4)->Arg(16);

}  // namespace
