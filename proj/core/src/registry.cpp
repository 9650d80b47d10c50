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

#include "camino/registry.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "camino/errors.hpp"

namespace camino::registry {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json revision_ref_to_json(const RevisionRef& ref) {
  return {{"repo", ref.repo},       {"package", ref.package}, {"revision", ref.revision},
          {"service", ref.service}, {"edge", ref.edge},       {"network", ref.network}};
}

RevisionRef revision_ref_from_json(const json& doc) {
  RevisionRef ref;
  ref.repo = doc.at("repo").get<std::string>();
  ref.package = doc.at("package").get<std::string>();
  ref.revision = doc.at("revision").get<std::string>();
  ref.service = doc.at("service").get<std::string>();
  ref.edge = doc.at("edge").get<std::string>();
  ref.network = doc.at("network").get<bool>();
  return ref;
}

json decision_to_json(const AdmissionDecision& decision) {
  json reasons = json::array();
  for (const Reason& reason : decision.reasons) {
    reasons.push_back({{"service", reason.service}, {"code", reason.code}, {"detail", reason.detail}});
  }
  json plan = json::object();
  for (const auto& [edge, entries] : decision.resource_plan) {
    json list = json::array();
    for (const ResourcePlanEntry& entry : entries) {
      list.push_back({{"service", entry.service},
                      {"cpu_millicores", entry.cpu_millicores},
                      {"memory_bytes", entry.memory_bytes}});
    }
    plan[edge] = std::move(list);
  }
  return {{"deployment_id", decision.deployment_id},
          {"verdict", decision.approved ? "Approved" : "Rejected"},
          {"reasons", std::move(reasons)},
          {"resource_plan", std::move(plan)}};
}

AdmissionDecision decision_from_json(const json& doc) {
  AdmissionDecision decision;
  decision.deployment_id = doc.at("deployment_id").get<std::string>();
  decision.approved = doc.at("verdict").get<std::string>() == "Approved";
  for (const auto& entry : doc.at("reasons")) {
    decision.reasons.push_back(Reason{entry.at("service").get<std::string>(),
                                      entry.at("code").get<std::string>(),
                                      entry.at("detail").get<std::string>()});
  }
  for (const auto& [edge, entries] : doc.at("resource_plan").items()) {
    std::vector<ResourcePlanEntry> list;
    for (const auto& entry : entries) {
      list.push_back(ResourcePlanEntry{entry.at("service").get<std::string>(),
                                       entry.at("cpu_millicores").get<std::int64_t>(),
                                       entry.at("memory_bytes").get<std::int64_t>()});
    }
    decision.resource_plan[edge] = std::move(list);
  }
  return decision;
}

}  // namespace

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Accepted: return "Accepted";
    case Phase::Deploying: return "Deploying";
    case Phase::Running: return "Running";
    case Phase::Terminating: return "Terminating";
    case Phase::Terminated: return "Terminated";
    case Phase::Rejected: return "Rejected";
    case Phase::Failed: return "Failed";
  }
  return "Accepted";
}

Phase phase_from_string(std::string_view text) {
  if (text == "Accepted") return Phase::Accepted;
  if (text == "Deploying") return Phase::Deploying;
  if (text == "Running") return Phase::Running;
  if (text == "Terminating") return Phase::Terminating;
  if (text == "Terminated") return Phase::Terminated;
  if (text == "Rejected") return Phase::Rejected;
  if (text == "Failed") return Phase::Failed;
  throw CaminoError(Errc::SchemaError, "unknown phase '" + std::string(text) + "'");
}

bool is_terminal(Phase phase) {
  return phase == Phase::Terminated || phase == Phase::Rejected || phase == Phase::Failed;
}

namespace {

int chain_rank(Phase phase) {
  switch (phase) {
    case Phase::Accepted: return 0;
    case Phase::Deploying: return 1;
    case Phase::Running: return 2;
    case Phase::Terminating: return 3;
    case Phase::Terminated: return 4;
    case Phase::Rejected:
    case Phase::Failed: return 5;
  }
  return 0;
}

bool allowed_transition(Phase from, Phase to) {
  if (from == to) return true;
  if (is_terminal(from)) return false;
  if (to == Phase::Rejected || to == Phase::Failed) {
    return chain_rank(from) < chain_rank(Phase::Running);
  }
  return chain_rank(to) > chain_rank(from);
}

}  // namespace

std::string to_json_text(const DeploymentRecord& record) {
  ordered_json doc;
  doc["deployment_id"] = record.deployment_id;
  doc["phase"] = to_string(record.phase);
  doc["intent"] = json::parse(intent::to_json_text(record.intent));
  doc["order"] = record.order;
  doc["placement"] = record.placement;
  doc["namespace"] = record.ns;
  doc["decision"] = decision_to_json(record.decision);
  json service_revisions = json::array();
  for (const RevisionRef& ref : record.service_revisions) {
    service_revisions.push_back(revision_ref_to_json(ref));
  }
  doc["service_revisions"] = std::move(service_revisions);
  json network_revisions = json::array();
  for (const RevisionRef& ref : record.network_revisions) {
    network_revisions.push_back(revision_ref_to_json(ref));
  }
  doc["network_revisions"] = std::move(network_revisions);
  if (!record.network.services.empty() || !record.network.deployment_id.empty()) {
    doc["network_intent"] = json::parse(intent::to_json_text(record.network));
  }
  doc["mesh_plans"] = record.mesh_plans;
  doc["proxy_injections"] = record.proxy_injections;
  doc["published_services"] = record.published_services;
  doc["links"] = {{"intra", record.links_intra},
                  {"inter", record.links_inter},
                  {"cross_domain", record.links_cross}};
  return doc.dump(2);
}

DeploymentRecord record_from_json_text(std::string_view text) {
  const json doc = json::parse(text);
  DeploymentRecord record;
  record.deployment_id = doc.at("deployment_id").get<std::string>();
  record.phase = phase_from_string(doc.at("phase").get<std::string>());
  record.intent = intent::parse_deployment_intent(doc.at("intent").dump());
  record.order = doc.at("order").get<std::vector<std::string>>();
  for (const auto& [service, edge] : doc.at("placement").items()) {
    record.placement[service] = edge.get<std::string>();
  }
  record.ns = doc.at("namespace").get<std::string>();
  record.decision = decision_from_json(doc.at("decision"));
  for (const auto& entry : doc.at("service_revisions")) {
    record.service_revisions.push_back(revision_ref_from_json(entry));
  }
  for (const auto& entry : doc.at("network_revisions")) {
    record.network_revisions.push_back(revision_ref_from_json(entry));
  }
  if (doc.contains("network_intent")) {
    record.network = intent::parse_network_intent(doc.at("network_intent").dump());
  }
  for (const auto& [edge, plan] : doc.at("mesh_plans").items()) {
    record.mesh_plans[edge] = plan.get<std::string>();
  }
  for (const auto& [service, enabled] : doc.at("proxy_injections").items()) {
    record.proxy_injections[service] = enabled.get<bool>();
  }
  record.published_services = doc.at("published_services").get<std::size_t>();
  record.links_intra = doc.at("links").at("intra").get<int>();
  record.links_inter = doc.at("links").at("inter").get<int>();
  record.links_cross = doc.at("links").at("cross_domain").get<int>();
  return record;
}

DeploymentRegistry::DeploymentRegistry(std::filesystem::path file) : file_(std::move(file)) {
  load();
}

void DeploymentRegistry::load() {
  if (!std::filesystem::exists(file_)) return;
  std::ifstream in(file_, std::ios::binary);
  if (!in) throw CaminoError(Errc::StorageError, "cannot read registry " + file_.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const json doc = json::parse(buffer.str());
  for (const auto& entry : doc.at("deployments")) {
    DeploymentRecord record = record_from_json_text(entry.dump());
    records_[record.deployment_id] = std::move(record);
  }
}

void DeploymentRegistry::persist_locked() const {
  json doc;
  doc["deployments"] = json::array();
  for (const auto& [id, record] : records_) {
    (void)id;
    doc["deployments"].push_back(json::parse(to_json_text(record)));
  }
  std::filesystem::create_directories(file_.parent_path());
  std::ofstream out(file_, std::ios::binary | std::ios::trunc);
  if (!out) throw CaminoError(Errc::StorageError, "cannot write registry " + file_.string());
  out << doc.dump(2);
}

bool DeploymentRegistry::contains(const std::string& deployment_id) const {
  std::lock_guard lock(mutex_);
  return records_.count(deployment_id) > 0;
}

DeploymentRecord DeploymentRegistry::get(const std::string& deployment_id) const {
  std::lock_guard lock(mutex_);
  const auto it = records_.find(deployment_id);
  if (it == records_.end()) {
    throw CaminoError(Errc::UnknownDeployment, "deployment '" + deployment_id + "' not found");
  }
  return it->second;
}

std::vector<DeploymentRecord> DeploymentRegistry::all() const {
  std::lock_guard lock(mutex_);
  std::vector<DeploymentRecord> out;
  out.reserve(records_.size());
  for (const auto& [id, record] : records_) {
    (void)id;
    out.push_back(record);
  }
  return out;
}

void DeploymentRegistry::put(const DeploymentRecord& record) {
  std::lock_guard lock(mutex_);
  const auto it = records_.find(record.deployment_id);
  if (it != records_.end() && !allowed_transition(it->second.phase, record.phase)) {
    throw CaminoError(Errc::EngineError,
                      std::string("phase cannot move ") + to_string(it->second.phase) + " -> " +
                          to_string(record.phase));
  }
  records_[record.deployment_id] = record;
  persist_locked();
}

DeploymentRecord DeploymentRegistry::set_phase(const std::string& deployment_id, Phase phase) {
  std::lock_guard lock(mutex_);
  const auto it = records_.find(deployment_id);
  if (it == records_.end()) {
    throw CaminoError(Errc::UnknownDeployment, "deployment '" + deployment_id + "' not found");
  }
  if (!allowed_transition(it->second.phase, phase)) {
    throw CaminoError(Errc::EngineError, std::string("phase cannot move ") +
                                             to_string(it->second.phase) + " -> " + to_string(phase));
  }
  it->second.phase = phase;
  persist_locked();
  return it->second;
}

void DeploymentRegistry::erase(const std::string& deployment_id) {
  std::lock_guard lock(mutex_);
  records_.erase(deployment_id);
  persist_locked();
}

}  // namespace camino::registry
