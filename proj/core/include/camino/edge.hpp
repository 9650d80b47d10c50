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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "camino/store.hpp"

namespace camino::edgesim {

struct Resources {
  std::int64_t cpu_millicores{0};
  std::int64_t memory_bytes{0};

  Resources& operator+=(const Resources& other) {
    cpu_millicores += other.cpu_millicores;
    memory_bytes += other.memory_bytes;
    return *this;
  }
  Resources& operator-=(const Resources& other) {
    cpu_millicores -= other.cpu_millicores;
    memory_bytes -= other.memory_bytes;
    return *this;
  }
  bool fits_within(const Resources& bound) const {
    return cpu_millicores <= bound.cpu_millicores && memory_bytes <= bound.memory_bytes;
  }
  bool operator==(const Resources&) const = default;
};

// Lifecycle chain; transitions only ever move forward along it.
enum class WorkloadState { Pending, Starting, Running, Terminating, Removed };

const char* to_string(WorkloadState state);
int rank(WorkloadState state);

struct Workload {
  std::string id;  // "<deployment_id>/<package>@<revision>"
  std::string deployment_id;
  std::string service;   // original package name from the intent
  std::string package;   // deployment-repository package name
  std::string revision;  // deployment-repository revision label
  std::string ns;
  Resources requests;
  WorkloadState state{WorkloadState::Pending};
  int start_delay{0};
  bool mesh_proxy{false};
  std::string condition;
};

struct StateChange {
  enum class Kind { Create, Transition, ApplyConfig, RemoveConfig, Condition };
  Kind kind{Kind::Create};
  std::string subject;  // workload id, or package name for configs
  WorkloadState from{WorkloadState::Pending};
  WorkloadState to{WorkloadState::Pending};
  std::string detail;
};

struct DryRunResult {
  bool accepted{true};
  std::string code;    // MissingCapability | UnknownKind | SchemaError
  std::string detail;
};

struct EdgeSpec {
  std::string id;
  Resources capacity;
  std::set<std::string> capabilities;
  int reconcile_interval{5};
  std::uint64_t seed{1};
  std::string deployment_repo;
  int min_start_delay{1};
  int max_start_delay{5};
};

struct TopologyConfig {
  std::vector<EdgeSpec> edges;

  static TopologyConfig from_json_text(std::string_view text);
  static TopologyConfig load(const std::filesystem::path& path);
};

// One simulated edge cluster: namespaces, workloads with lifecycle states,
// resource accounting, a capability set, and a pull-based reconciler that
// converges actual state to the edge's deployment repository.
//
// Time is discrete. advance() runs, per tick: reconcile (every
// reconcile_interval ticks), Pending starts (resources commit at Starting),
// Starting delay countdown, Terminating removal (resources release), then
// the on_tick hook. Each workload moves at most one state per tick.
class EdgeSim {
 public:
  explicit EdgeSim(EdgeSpec spec);

  void attach_store(const store::PackageStore* store);

  // Diffs desired (latest Published revisions) against actual workloads and
  // applied configs. Idempotent: a second call with an unchanged repository
  // yields no changes.
  std::vector<StateChange> reconcile();

  void advance(int ticks);

  // Validates manifest shapes and capability requirements without touching
  // any state.
  DryRunResult dry_run(const store::PackageRevision& revision) const;

  const std::string& id() const { return spec_.id; }
  const EdgeSpec& spec() const { return spec_; }
  Resources capacity() const { return spec_.capacity; }
  Resources committed() const;
  Resources free() const;
  std::int64_t tick() const;
  std::int64_t last_reconcile_tick() const;

  std::vector<Workload> workloads() const;  // non-Removed, sorted by id
  std::optional<Workload> find_workload(const std::string& id) const;
  std::map<std::string, std::set<std::string>> namespaces() const;
  std::map<std::string, int> config_kind_counts() const;
  bool has_config_package(const std::string& package) const;

  // Deterministic per-workload usage noise in [0.6, 1.15].
  double usage_factor(const std::string& workload_id, std::int64_t tick, bool memory) const;

  using TickHook = std::function<void(EdgeSim&)>;
  void set_on_tick(TickHook hook);

  using TraceHook = std::function<void(const std::string& edge, const StateChange&)>;
  void set_trace(TraceHook hook);

 private:
  struct AppliedConfig {
    std::string revision;
    std::string ns;
    std::vector<manifest::Document> manifests;
  };

  std::vector<StateChange> reconcile_locked();
  void emit(std::vector<StateChange>& out, StateChange change);
  Resources committed_locked() const;
  void transition(Workload& workload, WorkloadState to, std::vector<StateChange>& out);

  EdgeSpec spec_;
  const store::PackageStore* store_{nullptr};
  std::int64_t tick_{0};
  std::int64_t last_reconcile_tick_{-1};
  std::map<std::string, Workload> workloads_;          // by workload id, non-Removed
  std::map<std::string, AppliedConfig> configs_;       // by package name
  TickHook on_tick_;
  TraceHook trace_;
  mutable std::mutex mutex_;
};

// Builds a workload from a hydrated revision's Deployment manifest; nullopt
// for config-only packages (no Deployment manifest).
std::optional<Workload> workload_from_revision(const store::PackageRevision& revision);

}  // namespace camino::edgesim
