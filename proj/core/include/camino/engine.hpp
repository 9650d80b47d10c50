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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "camino/admission.hpp"
#include "camino/edge.hpp"
#include "camino/intent.hpp"
#include "camino/mesh.hpp"
#include "camino/monitoring.hpp"
#include "camino/registry.hpp"
#include "camino/store.hpp"

namespace camino::engine {

enum class Role { Admin, External };

struct EngineConfig {
  std::string listen_address{"127.0.0.1:8787"};
  std::map<std::string, Role> tokens;
  mesh::TrustedDomainTable trusted_domains;
  edgesim::TopologyConfig topology;
  std::filesystem::path store_root{"state/store"};
  std::filesystem::path registry_path{"state/registry.json"};
  std::filesystem::path blueprint_fixtures;  // imported (and published) at boot when set
  std::filesystem::path iesd_dir;            // one <package>.json descriptor per file
  std::string blueprint_repo{"blueprints"};
  mesh::MeshOptions mesh_options;
  int auto_tick_ms{0};  // 0: ticks only via advance()
  std::size_t metrics_ring_capacity{100000};
  bool sequence_on_readiness{false};

  static EngineConfig from_json_text(std::string_view text, const std::filesystem::path& base_dir);
  static EngineConfig from_json_file(const std::filesystem::path& path);
};

struct HealthReport {
  bool ok{true};
  bool store_ok{true};
  bool monitoring_ok{true};
  struct EdgeHealth {
    std::string edge_id;
    bool ok{true};
    std::int64_t tick{0};
    std::int64_t last_reconcile_tick{-1};
  };
  std::vector<EdgeHealth> edges;
};

std::string to_json_text(const HealthReport& report);

struct CatalogReport {
  std::vector<store::CatalogEntry> entries;
  std::int64_t reserved_cpu_millicores{0};
  std::int64_t reserved_memory_bytes{0};
};

std::string to_json_text(const CatalogReport& report);

// The orchestration pipeline behind the Domain Manager: parse -> order ->
// place -> derive network intent -> plan mesh -> hydrate -> admit ->
// publish, plus lifecycle tracking against the simulated edges. The same
// engine backs the HTTP server and the embedded scenario runner.
class Engine {
 public:
  explicit Engine(EngineConfig config);
  ~Engine();

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // Runs the pipeline. The returned record is Deploying on approval and
  // Rejected (with the decision embedded) when admission fails. Throws
  // CaminoError for parse/validation problems, DuplicateId for resubmission
  // and CapacityError when placement finds no feasible assignment.
  registry::DeploymentRecord submit(std::string_view intent_json);

  // Authorizes and initiates termination; deletion order is network
  // packages first, then services in reverse deployment order. Idempotent
  // for records that are already terminal.
  registry::DeploymentRecord terminate(const std::string& deployment_id);

  registry::DeploymentRecord status(const std::string& deployment_id);
  std::vector<registry::DeploymentRecord> deployments();

  // Record plus live per-service workload states, as JSON.
  std::string describe(const std::string& deployment_id);

  CatalogReport catalog() const;
  std::vector<monitor::QueryResult> metrics(monitor::MetricQuery query, Role role) const;
  HealthReport health() const;
  std::string resolve_domain(const std::string& name) const;

  void advance(int ticks);
  void start_ticker();
  void stop_ticker();

  std::optional<Role> authenticate(const std::string& token) const;

  store::PackageStore& package_store() { return *store_; }
  monitor::MonitoringPlane& monitoring() { return *monitoring_; }
  admission::ResourceLedger& resource_ledger() { return ledger_; }
  registry::DeploymentRegistry& deployment_registry() { return *registry_; }
  edgesim::EdgeSim* edge(const std::string& id);
  std::vector<const edgesim::EdgeSim*> edge_views() const;
  const EngineConfig& config() const { return config_; }
  std::string export_metrics() const { return monitoring_->export_jsonl(); }

  void add_descriptor(intent::PackageDescriptor descriptor);

 private:
  void import_blueprints(const std::filesystem::path& dir);
  void load_descriptors(const std::filesystem::path& dir);
  void rebuild_ledger();
  void refresh_phases(bool publish_staged);

  EngineConfig config_;
  std::unique_ptr<store::PackageStore> store_;
  std::unique_ptr<registry::DeploymentRegistry> registry_;
  std::unique_ptr<monitor::MonitoringPlane> monitoring_;
  std::vector<std::unique_ptr<edgesim::EdgeSim>> edges_;
  std::map<std::string, std::string> edge_repos_;  // edge id -> deployment repo
  admission::ResourceLedger ledger_;
  std::unique_ptr<admission::AdmissionController> admission_;
  std::map<std::string, intent::PackageDescriptor> descriptors_;

  std::mutex tick_mutex_;
  std::mutex phase_mutex_;
  std::thread ticker_;
  std::atomic<bool> ticking_{false};
};

}  // namespace camino::engine
