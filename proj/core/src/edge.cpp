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

#include "camino/edge.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "camino/errors.hpp"
#include "camino/quantity.hpp"
#include "camino/rand.hpp"

namespace camino::edgesim {
namespace {

using nlohmann::json;

std::optional<std::string> scalar_string_at(const manifest::Document& doc, std::string_view path) {
  const manifest::Node* node = manifest::find_path(doc, path);
  if (node == nullptr || !node->is_scalar() ||
      !std::holds_alternative<std::string>(node->scalar())) {
    return std::nullopt;
  }
  return std::get<std::string>(node->scalar());
}

std::int64_t parse_cpu_scalar(const manifest::ScalarValue& value) {
  if (std::holds_alternative<std::int64_t>(value)) {
    return quantity::parse_cpu_millicores(std::get<std::int64_t>(value));
  }
  if (std::holds_alternative<std::string>(value)) {
    return quantity::parse_cpu_millicores(std::get<std::string>(value));
  }
  throw CaminoError(Errc::QuantityError, "cpu must be an integer or string");
}

std::int64_t parse_memory_scalar(const manifest::ScalarValue& value) {
  if (std::holds_alternative<std::int64_t>(value)) {
    const auto bytes = std::get<std::int64_t>(value);
    if (bytes <= 0) throw CaminoError(Errc::QuantityError, "memory must be positive");
    return bytes;
  }
  if (std::holds_alternative<std::string>(value)) {
    return quantity::parse_memory_bytes(std::get<std::string>(value));
  }
  throw CaminoError(Errc::QuantityError, "memory must be an integer or string");
}

const manifest::Document* manifest_of_kind(const std::vector<manifest::Document>& docs,
                                           std::string_view kind) {
  for (const manifest::Document& doc : docs) {
    const auto value = scalar_string_at(doc, "kind");
    if (value && *value == kind) return &doc;
  }
  return nullptr;
}

// Capability demanded by a manifest kind; empty set when none.
std::vector<std::string> required_capabilities(const std::string& kind) {
  if (kind == "IngressRule") return {"ingress-controller"};
  if (kind == "Route" || kind == "RemoteEntry") return {"service-mesh"};
  if (kind == "Gateway") return {"service-mesh", "east-west-gateway"};
  return {};
}

bool is_known_kind(const std::string& kind) {
  static const std::set<std::string> kKinds = {"Deployment", "Service",     "IngressRule",
                                               "Route",      "RemoteEntry", "Gateway"};
  return kKinds.count(kind) > 0;
}

}  // namespace

const char* to_string(WorkloadState state) {
  switch (state) {
    case WorkloadState::Pending: return "Pending";
    case WorkloadState::Starting: return "Starting";
    case WorkloadState::Running: return "Running";
    case WorkloadState::Terminating: return "Terminating";
    case WorkloadState::Removed: return "Removed";
  }
  return "Pending";
}

int rank(WorkloadState state) { return static_cast<int>(state); }

TopologyConfig TopologyConfig::from_json_text(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw CaminoError(Errc::SyntaxError, "malformed topology JSON");
  if (!doc.is_object() || !doc.contains("edges") || !doc.at("edges").is_array()) {
    throw CaminoError(Errc::SchemaError, "topology: expected {\"edges\": [...]}");
  }
  TopologyConfig topology;
  std::set<std::string> seen;
  for (const auto& entry : doc.at("edges")) {
    if (!entry.is_object()) throw CaminoError(Errc::SchemaError, "topology: edge must be an object");
    EdgeSpec spec;
    spec.id = entry.at("id").get<std::string>();
    if (spec.id.empty() || !seen.insert(spec.id).second) {
      throw CaminoError(Errc::SchemaError, "topology: duplicate or empty edge id");
    }
    const auto& cpu = entry.at("cpu");
    spec.capacity.cpu_millicores = cpu.is_number_integer()
                                       ? quantity::parse_cpu_millicores(cpu.get<std::int64_t>())
                                       : quantity::parse_cpu_millicores(cpu.get<std::string>());
    const auto& memory = entry.at("memory");
    spec.capacity.memory_bytes = memory.is_number_integer()
                                     ? memory.get<std::int64_t>()
                                     : quantity::parse_memory_bytes(memory.get<std::string>());
    if (entry.contains("capabilities")) {
      for (const auto& capability : entry.at("capabilities")) {
        spec.capabilities.insert(capability.get<std::string>());
      }
    }
    if (entry.contains("reconcile_interval")) {
      spec.reconcile_interval = entry.at("reconcile_interval").get<int>();
      if (spec.reconcile_interval < 1) {
        throw CaminoError(Errc::SchemaError, "topology: reconcile_interval must be >= 1");
      }
    }
    if (entry.contains("seed")) spec.seed = entry.at("seed").get<std::uint64_t>();
    if (entry.contains("deployment_repo")) {
      spec.deployment_repo = entry.at("deployment_repo").get<std::string>();
    }
    if (entry.contains("start_delay")) {
      const auto& delay = entry.at("start_delay");
      if (!delay.is_array() || delay.size() != 2) {
        throw CaminoError(Errc::SchemaError, "topology: start_delay must be [min, max]");
      }
      spec.min_start_delay = delay[0].get<int>();
      spec.max_start_delay = delay[1].get<int>();
      if (spec.min_start_delay < 1 || spec.max_start_delay < spec.min_start_delay) {
        throw CaminoError(Errc::SchemaError, "topology: bad start_delay range");
      }
    }
    topology.edges.push_back(std::move(spec));
  }
  if (topology.edges.empty()) throw CaminoError(Errc::SchemaError, "topology: no edges");
  return topology;
}

TopologyConfig TopologyConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CaminoError(Errc::StorageError, "cannot read topology " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

std::optional<Workload> workload_from_revision(const store::PackageRevision& revision) {
  const manifest::Document* deployment = manifest_of_kind(revision.manifests, "Deployment");
  if (deployment == nullptr) return std::nullopt;

  Workload workload;
  workload.package = revision.name;
  workload.revision = revision.revision;
  workload.deployment_id = revision.deployment_id;
  workload.service = revision.service.empty() ? revision.name : revision.service;
  workload.id = revision.deployment_id + "/" + revision.name + "@" + revision.revision;
  workload.ns = scalar_string_at(*deployment, "metadata.namespace").value_or("default");

  if (const manifest::Node* cpu =
          manifest::find_path(*deployment, "spec.containers.0.resources.cpu");
      cpu != nullptr && cpu->is_scalar()) {
    workload.requests.cpu_millicores = parse_cpu_scalar(cpu->scalar());
  }
  if (const manifest::Node* memory =
          manifest::find_path(*deployment, "spec.containers.0.resources.memory");
      memory != nullptr && memory->is_scalar()) {
    workload.requests.memory_bytes = parse_memory_scalar(memory->scalar());
  }
  if (const manifest::Node* proxy = manifest::find_path(*deployment, "spec.mesh_proxy");
      proxy != nullptr && proxy->is_scalar() && std::holds_alternative<bool>(proxy->scalar())) {
    workload.mesh_proxy = std::get<bool>(proxy->scalar());
  }
  return workload;
}

EdgeSim::EdgeSim(EdgeSpec spec) : spec_(std::move(spec)) {}

void EdgeSim::attach_store(const store::PackageStore* store) {
  std::lock_guard lock(mutex_);
  store_ = store;
}

void EdgeSim::set_on_tick(TickHook hook) {
  std::lock_guard lock(mutex_);
  on_tick_ = std::move(hook);
}

void EdgeSim::set_trace(TraceHook hook) {
  std::lock_guard lock(mutex_);
  trace_ = std::move(hook);
}

void EdgeSim::emit(std::vector<StateChange>& out, StateChange change) {
  if (trace_) trace_(spec_.id, change);
  out.push_back(std::move(change));
}

void EdgeSim::transition(Workload& workload, WorkloadState to, std::vector<StateChange>& out) {
  StateChange change;
  change.kind = StateChange::Kind::Transition;
  change.subject = workload.id;
  change.from = workload.state;
  change.to = to;
  workload.state = to;
  emit(out, std::move(change));
}

Resources EdgeSim::committed_locked() const {
  Resources total;
  for (const auto& [id, workload] : workloads_) {
    (void)id;
    if (workload.state == WorkloadState::Starting || workload.state == WorkloadState::Running ||
        workload.state == WorkloadState::Terminating) {
      total += workload.requests;
    }
  }
  return total;
}

Resources EdgeSim::committed() const {
  std::lock_guard lock(mutex_);
  return committed_locked();
}

Resources EdgeSim::free() const {
  std::lock_guard lock(mutex_);
  Resources out = spec_.capacity;
  out -= committed_locked();
  return out;
}

std::int64_t EdgeSim::tick() const {
  std::lock_guard lock(mutex_);
  return tick_;
}

std::int64_t EdgeSim::last_reconcile_tick() const {
  std::lock_guard lock(mutex_);
  return last_reconcile_tick_;
}

std::vector<Workload> EdgeSim::workloads() const {
  std::lock_guard lock(mutex_);
  std::vector<Workload> out;
  out.reserve(workloads_.size());
  for (const auto& [id, workload] : workloads_) {
    (void)id;
    out.push_back(workload);
  }
  return out;
}

std::optional<Workload> EdgeSim::find_workload(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = workloads_.find(id);
  if (it == workloads_.end()) return std::nullopt;
  return it->second;
}

std::map<std::string, std::set<std::string>> EdgeSim::namespaces() const {
  std::lock_guard lock(mutex_);
  std::map<std::string, std::set<std::string>> out;
  for (const auto& [id, workload] : workloads_) out[workload.ns].insert(id);
  for (const auto& [package, config] : configs_) {
    (void)package;
    out[config.ns];  // a namespace can hold only configuration
  }
  return out;
}

std::map<std::string, int> EdgeSim::config_kind_counts() const {
  std::lock_guard lock(mutex_);
  std::map<std::string, int> out;
  for (const auto& [package, config] : configs_) {
    (void)package;
    for (const manifest::Document& doc : config.manifests) {
      const auto kind = scalar_string_at(doc, "kind");
      if (kind) ++out[*kind];
    }
  }
  return out;
}

bool EdgeSim::has_config_package(const std::string& package) const {
  std::lock_guard lock(mutex_);
  return configs_.count(package) > 0;
}

double EdgeSim::usage_factor(const std::string& workload_id, std::int64_t tick, bool memory) const {
  const std::uint64_t salt = memory ? 0x6d656d6f72790a01ULL : 0x6370752d75736501ULL;
  SplitMix64 rng(fnv1a(workload_id, spec_.seed ^ salt) ^ static_cast<std::uint64_t>(tick) * 0x9e3779b97f4a7c15ULL);
  return 0.6 + 0.55 * rng.uniform01();
}

DryRunResult EdgeSim::dry_run(const store::PackageRevision& revision) const {
  for (const manifest::Document& doc : revision.manifests) {
    const auto kind = scalar_string_at(doc, "kind");
    if (!kind) return {false, "SchemaError", "manifest without a scalar 'kind' field"};
    if (!is_known_kind(*kind)) return {false, "UnknownKind", "unknown kind '" + *kind + "'"};
    for (const std::string& capability : required_capabilities(*kind)) {
      if (spec_.capabilities.count(capability) == 0) {
        return {false, "MissingCapability", capability};
      }
    }
    if (*kind == "Deployment") {
      const manifest::Node* containers = manifest::find_path(doc, "spec.containers");
      if (containers == nullptr || !containers->is_list() || containers->list().empty()) {
        return {false, "SchemaError", "Deployment needs spec.containers"};
      }
      try {
        if (const manifest::Node* cpu = manifest::find_path(doc, "spec.containers.0.resources.cpu");
            cpu != nullptr && cpu->is_scalar()) {
          parse_cpu_scalar(cpu->scalar());
        }
        if (const manifest::Node* memory =
                manifest::find_path(doc, "spec.containers.0.resources.memory");
            memory != nullptr && memory->is_scalar()) {
          parse_memory_scalar(memory->scalar());
        }
      } catch (const CaminoError& error) {
        return {false, "SchemaError", error.what()};
      }
    } else if (*kind == "Service") {
      if (!scalar_string_at(doc, "spec.host") ||
          manifest::find_path(doc, "spec.port") == nullptr ||
          !scalar_string_at(doc, "spec.protocol")) {
        return {false, "SchemaError", "Service needs spec.host/port/protocol"};
      }
    }
  }
  return {true, "", ""};
}

std::vector<StateChange> EdgeSim::reconcile() {
  std::lock_guard lock(mutex_);
  return reconcile_locked();
}

std::vector<StateChange> EdgeSim::reconcile_locked() {
  std::vector<StateChange> changes;
  if (store_ == nullptr || spec_.deployment_repo.empty()) return changes;
  if (!store_->has_repository(spec_.deployment_repo)) return changes;

  last_reconcile_tick_ = tick_;
  const std::vector<store::PackageRevision> desired = store_->published_latest(spec_.deployment_repo);

  // Desired workloads and configs, keyed for the diff.
  std::set<std::string> desired_workload_ids;
  Resources desired_total;
  std::vector<Workload> to_create;
  for (const store::PackageRevision& revision : desired) {
    std::optional<Workload> workload = workload_from_revision(revision);
    if (workload) {
      desired_total += workload->requests;
      desired_workload_ids.insert(workload->id);
      if (workloads_.find(workload->id) == workloads_.end()) {
        to_create.push_back(std::move(*workload));
      }
      continue;
    }
    // Config-only package: apply or refresh.
    const auto it = configs_.find(revision.name);
    if (it == configs_.end() || it->second.revision != revision.revision) {
      AppliedConfig config;
      config.revision = revision.revision;
      config.manifests = revision.manifests;
      config.ns = "default";
      if (!revision.manifests.empty()) {
        if (const auto ns = scalar_string_at(revision.manifests.front(), "metadata.namespace"); ns) {
          config.ns = *ns;
        }
      }
      configs_[revision.name] = std::move(config);
      StateChange change;
      change.kind = StateChange::Kind::ApplyConfig;
      change.subject = revision.name;
      change.detail = revision.revision;
      emit(changes, std::move(change));
    }
  }

  // Superfluous configs.
  std::set<std::string> desired_config_packages;
  for (const store::PackageRevision& revision : desired) {
    if (!workload_from_revision(revision)) desired_config_packages.insert(revision.name);
  }
  for (auto it = configs_.begin(); it != configs_.end();) {
    if (desired_config_packages.count(it->first) == 0) {
      StateChange change;
      change.kind = StateChange::Kind::RemoveConfig;
      change.subject = it->first;
      emit(changes, std::move(change));
      it = configs_.erase(it);
    } else {
      ++it;
    }
  }

  // Superfluous workloads drain through Terminating.
  for (auto& [id, workload] : workloads_) {
    if (desired_workload_ids.count(id) > 0) continue;
    if (rank(workload.state) < rank(WorkloadState::Terminating)) {
      transition(workload, WorkloadState::Terminating, changes);
    }
  }

  // Desired state beyond capacity is reported, never partially started.
  const bool breach = !desired_total.fits_within(spec_.capacity);
  for (Workload& workload : to_create) {
    if (breach) {
      workload.condition = "CapacityBreach: desired state exceeds capacity";
    }
    StateChange change;
    change.kind = StateChange::Kind::Create;
    change.subject = workload.id;
    change.to = WorkloadState::Pending;
    emit(changes, std::move(change));
    if (breach) {
      StateChange condition;
      condition.kind = StateChange::Kind::Condition;
      condition.subject = workload.id;
      condition.detail = workload.condition;
      emit(changes, condition);
    }
    workloads_[workload.id] = std::move(workload);
  }
  return changes;
}

void EdgeSim::advance(int ticks) {
  if (ticks < 1) throw CaminoError(Errc::SemanticError, "advance needs ticks >= 1");
  for (int step = 0; step < ticks; ++step) {
    TickHook hook;
    {
      std::lock_guard lock(mutex_);
      ++tick_;
      std::vector<StateChange> changes;

      if (store_ != nullptr && spec_.reconcile_interval > 0 &&
          tick_ % spec_.reconcile_interval == 0) {
        reconcile_locked();
      }

      // Snapshot states so each workload advances at most one step per tick.
      std::map<std::string, WorkloadState> at_tick_start;
      for (const auto& [id, workload] : workloads_) at_tick_start[id] = workload.state;

      // Pending -> Starting, deterministic order, resources commit here.
      SplitMix64 delay_rng(spec_.seed ^ static_cast<std::uint64_t>(tick_) * 0x2545f4914f6cdd1dULL);
      for (auto& [id, workload] : workloads_) {
        if (at_tick_start[id] != WorkloadState::Pending) continue;
        Resources would_be = committed_locked();
        would_be += workload.requests;
        if (would_be.fits_within(spec_.capacity)) {
          workload.start_delay = static_cast<int>(
              delay_rng.uniform(spec_.min_start_delay, spec_.max_start_delay));
          workload.condition.clear();
          transition(workload, WorkloadState::Starting, changes);
        } else if (workload.condition.empty()) {
          workload.condition = "CapacityBreach: insufficient free resources";
          StateChange condition;
          condition.kind = StateChange::Kind::Condition;
          condition.subject = id;
          condition.detail = workload.condition;
          emit(changes, condition);
        }
      }

      // Starting countdown.
      for (auto& [id, workload] : workloads_) {
        if (at_tick_start[id] != WorkloadState::Starting) continue;
        if (--workload.start_delay <= 0) transition(workload, WorkloadState::Running, changes);
      }

      // Terminating -> Removed releases resources and prunes the namespace.
      for (auto it = workloads_.begin(); it != workloads_.end();) {
        if (at_tick_start.count(it->first) > 0 &&
            at_tick_start[it->first] == WorkloadState::Terminating) {
          transition(it->second, WorkloadState::Removed, changes);
          it = workloads_.erase(it);
        } else {
          ++it;
        }
      }
      hook = on_tick_;
    }
    if (hook) hook(*this);
  }
}

}  // namespace camino::edgesim
