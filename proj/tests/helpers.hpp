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

#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "camino/intent.hpp"
#include "camino/rand.hpp"

namespace camino::test {

inline std::filesystem::path fixtures_dir() { return CAMINO_FIXTURES_DIR; }

inline std::string read_fixture(const std::string& relative) {
  const std::filesystem::path path = fixtures_dir() / relative;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("camino-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline intent::ServiceSpec make_service(std::string name, std::string version = "v1",
                                        std::vector<intent::Dependency> deps = {}) {
  intent::ServiceSpec spec;
  spec.package_name = std::move(name);
  spec.version = std::move(version);
  spec.dependencies = std::move(deps);
  return spec;
}

inline intent::DeploymentIntent make_intent(std::string id,
                                            std::vector<intent::ServiceSpec> services,
                                            std::string domain = "Domain-X") {
  intent::DeploymentIntent intent;
  intent.domain_name = std::move(domain);
  intent.deployment_id = std::move(id);
  intent.timestamp = "2026-08-10T00:00:00";
  intent.services = std::move(services);
  return intent;
}

// Random local-DAG intent: service k may depend on earlier services, plus
// optional cross-domain dependencies.
inline intent::DeploymentIntent random_intent(SplitMix64& rng, const std::string& id,
                                              int max_services = 6, bool allow_external = true) {
  const int count = static_cast<int>(rng.uniform(1, max_services));
  std::vector<intent::ServiceSpec> services;
  for (int i = 0; i < count; ++i) {
    intent::ServiceSpec spec = make_service("svc-" + std::to_string(i));
    for (int j = 0; j < i; ++j) {
      if (rng.uniform01() < 0.35) {
        spec.dependencies.push_back({"svc-" + std::to_string(j), "Domain-X", ""});
      }
    }
    if (allow_external && rng.uniform01() < 0.3) {
      spec.dependencies.push_back({"ext-" + std::to_string(rng.uniform(0, 2)), "Domain-Y",
                                   "ext.domain-y.example"});
    }
    services.push_back(std::move(spec));
  }
  return make_intent(id, std::move(services));
}

inline intent::PlacementMap random_placement(SplitMix64& rng, const intent::DeploymentIntent& intent,
                                             int edge_count) {
  intent::PlacementMap placement;
  for (const auto& spec : intent.services) {
    placement[spec.package_name] = "Edge" + std::to_string(rng.uniform(1, edge_count));
  }
  return placement;
}

inline intent::EndpointCatalog catalog_for(const intent::DeploymentIntent& intent) {
  intent::EndpointCatalog catalog;
  int port = 8000;
  for (const auto& spec : intent.services) {
    catalog.endpoints[spec.package_name] = {
        {"host-" + spec.package_name, port++, intent::Protocol::Http}};
  }
  return catalog;
}

}  // namespace camino::test
