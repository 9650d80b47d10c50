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
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "camino/intent.hpp"

namespace camino::registry {

// Phases move forward only: Accepted -> Deploying -> Running -> Terminating
// -> Terminated. Rejected and Failed are terminal and reachable from any
// pre-Running phase.
enum class Phase { Accepted, Deploying, Running, Terminating, Terminated, Rejected, Failed };

const char* to_string(Phase phase);
Phase phase_from_string(std::string_view text);
bool is_terminal(Phase phase);

struct RevisionRef {
  std::string repo;
  std::string package;
  std::string revision;
  std::string service;
  std::string edge;
  bool network{false};

  bool operator==(const RevisionRef&) const = default;
};

struct Reason {
  std::string service;
  std::string code;
  std::string detail;

  bool operator==(const Reason&) const = default;
};

struct ResourcePlanEntry {
  std::string service;
  std::int64_t cpu_millicores{0};
  std::int64_t memory_bytes{0};

  bool operator==(const ResourcePlanEntry&) const = default;
};

struct AdmissionDecision {
  std::string deployment_id;
  bool approved{false};
  std::vector<Reason> reasons;  // non-empty iff rejected
  std::map<std::string, std::vector<ResourcePlanEntry>> resource_plan;  // by edge

  bool operator==(const AdmissionDecision&) const = default;
};

struct DeploymentRecord {
  std::string deployment_id;
  intent::DeploymentIntent intent;
  std::vector<std::string> order;
  intent::PlacementMap placement;
  Phase phase{Phase::Accepted};
  AdmissionDecision decision;
  std::string ns;
  std::vector<RevisionRef> service_revisions;  // publish order
  std::vector<RevisionRef> network_revisions;
  intent::NetworkIntent network;
  std::map<std::string, std::string> mesh_plans;  // edge -> mesh config JSON
  std::map<std::string, bool> proxy_injections;   // service -> sidecar enabled
  std::size_t published_services{0};              // staged publication progress
  int links_intra{0};
  int links_inter{0};
  int links_cross{0};
};

std::string to_json_text(const DeploymentRecord& record);
DeploymentRecord record_from_json_text(std::string_view text);

// Persistent table of deployment records. Every mutation is written through
// to the backing file so a restarted manager reports the same records.
class DeploymentRegistry {
 public:
  explicit DeploymentRegistry(std::filesystem::path file);

  bool contains(const std::string& deployment_id) const;
  DeploymentRecord get(const std::string& deployment_id) const;  // throws UnknownDeployment
  std::vector<DeploymentRecord> all() const;

  void put(const DeploymentRecord& record);
  // Enforces forward-only phase movement; returns the stored record.
  DeploymentRecord set_phase(const std::string& deployment_id, Phase phase);
  void erase(const std::string& deployment_id);

 private:
  void persist_locked() const;
  void load();

  std::filesystem::path file_;
  std::map<std::string, DeploymentRecord> records_;
  mutable std::mutex mutex_;
};

}  // namespace camino::registry
