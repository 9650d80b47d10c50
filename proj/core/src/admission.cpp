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

#include "camino/admission.hpp"

#include <algorithm>
#include <set>

#include "camino/errors.hpp"
#include "camino/quantity.hpp"

namespace camino::admission {
namespace {

const edgesim::EdgeSim* edge_by_id(const std::vector<const edgesim::EdgeSim*>& edges,
                                   const std::string& id) {
  for (const edgesim::EdgeSim* edge : edges) {
    if (edge != nullptr && edge->id() == id) return edge;
  }
  return nullptr;
}

// Per-edge request totals for the placed services.
std::map<std::string, edgesim::Resources> per_edge_demand(
    const intent::DeploymentIntent& intent, const intent::PlacementMap& placement,
    const std::map<std::string, intent::PackageDescriptor>& requirements) {
  std::map<std::string, edgesim::Resources> demand;
  for (const intent::ServiceSpec& spec : intent.services) {
    const auto edge = placement.find(spec.package_name);
    if (edge == placement.end()) {
      throw CaminoError(Errc::UnplacedService, spec.package_name + " has no edge assignment");
    }
    const auto descriptor = requirements.find(spec.package_name);
    if (descriptor == requirements.end()) {
      throw CaminoError(Errc::SemanticError, "no descriptor for service " + spec.package_name);
    }
    const intent::PackageRequirement* requirement =
        descriptor->second.requirement_for(spec.qos_level, spec.version);
    if (requirement == nullptr) {
      throw CaminoError(Errc::SemanticError, "descriptor for " + spec.package_name +
                                                 " has no requirement for qos '" + spec.qos_level +
                                                 "' revision " + spec.version);
    }
    demand[edge->second] += edgesim::Resources{requirement->resources.cpu_millicores,
                                               requirement->resources.memory_bytes};
  }
  return demand;
}

}  // namespace

void ResourceLedger::reserve(const std::string& deployment_id,
                             const std::map<std::string, edgesim::Resources>& per_edge) {
  std::lock_guard lock(mutex_);
  reservations_[deployment_id] = per_edge;
}

void ResourceLedger::release(const std::string& deployment_id) {
  std::lock_guard lock(mutex_);
  reservations_.erase(deployment_id);
}

bool ResourceLedger::holds(const std::string& deployment_id) const {
  std::lock_guard lock(mutex_);
  return reservations_.count(deployment_id) > 0;
}

edgesim::Resources ResourceLedger::reserved(const std::string& edge_id) const {
  std::lock_guard lock(mutex_);
  edgesim::Resources total;
  for (const auto& [deployment, per_edge] : reservations_) {
    (void)deployment;
    const auto it = per_edge.find(edge_id);
    if (it != per_edge.end()) total += it->second;
  }
  return total;
}

edgesim::Resources ResourceLedger::total() const {
  std::lock_guard lock(mutex_);
  edgesim::Resources total;
  for (const auto& [deployment, per_edge] : reservations_) {
    (void)deployment;
    for (const auto& [edge, resources] : per_edge) {
      (void)edge;
      total += resources;
    }
  }
  return total;
}

AdmissionController::AdmissionController(store::PackageStore& store, ResourceLedger& ledger)
    : store_(store), ledger_(ledger) {}

std::vector<ValidationFinding> AdmissionController::validate_packages(
    const std::vector<HydratedPackage>& hydrated,
    const std::vector<const edgesim::EdgeSim*>& edges) const {
  std::vector<ValidationFinding> findings;
  for (const HydratedPackage& package : hydrated) {
    const std::string& service = package.service;

    // Dialect re-validation: the stored form must round-trip.
    for (const manifest::Document& doc : package.revision.manifests) {
      try {
        const manifest::Document reparsed = manifest::parse(manifest::serialize(doc));
        if (!(reparsed == doc)) {
          findings.push_back({service, "DialectError", "manifest does not round-trip"});
        }
      } catch (const CaminoError& error) {
        findings.push_back({service, "DialectError", error.what()});
      }
    }

    // Unresolved-setter scan.
    for (const auto& [param, targets] : package.revision.setters) {
      (void)targets;
      findings.push_back({service, "UnresolvedSetter", param});
    }

    // Simulated dry-run against the target edge.
    const edgesim::EdgeSim* edge = edge_by_id(edges, package.edge);
    if (edge == nullptr) {
      findings.push_back({service, "SchemaError", "unknown target edge " + package.edge});
      continue;
    }
    const edgesim::DryRunResult result = edge->dry_run(package.revision);
    if (!result.accepted) {
      findings.push_back({service, result.code, result.detail});
    }
  }
  return findings;
}

std::vector<ResourceFinding> AdmissionController::check_resources(
    const intent::DeploymentIntent& intent, const intent::PlacementMap& placement,
    const std::map<std::string, intent::PackageDescriptor>& requirements,
    const std::vector<const edgesim::EdgeSim*>& edges) const {
  std::vector<ResourceFinding> findings;
  for (const auto& [edge_id, demand] : per_edge_demand(intent, placement, requirements)) {
    const edgesim::EdgeSim* edge = edge_by_id(edges, edge_id);
    if (edge == nullptr) {
      findings.push_back({edge_id, "cpu", demand.cpu_millicores, "unknown edge"});
      continue;
    }
    const edgesim::Resources free = edge->free();
    if (demand.cpu_millicores > free.cpu_millicores) {
      const std::int64_t shortfall = demand.cpu_millicores - free.cpu_millicores;
      findings.push_back({edge_id, "cpu", shortfall, quantity::format_millicores(shortfall)});
    }
    if (demand.memory_bytes > free.memory_bytes) {
      const std::int64_t shortfall = demand.memory_bytes - free.memory_bytes;
      findings.push_back({edge_id, "memory", shortfall, quantity::format_bytes(shortfall)});
    }
  }
  return findings;
}

registry::AdmissionDecision AdmissionController::admit(
    const intent::DeploymentIntent& intent, const std::vector<std::string>& order,
    const intent::PlacementMap& placement,
    const std::map<std::string, intent::PackageDescriptor>& requirements,
    const std::vector<HydratedPackage>& hydrated, const std::vector<const edgesim::EdgeSim*>& edges,
    const AdmitOptions& options) {
  registry::AdmissionDecision decision;
  decision.deployment_id = intent.deployment_id;

  const std::map<std::string, edgesim::Resources> demand =
      per_edge_demand(intent, placement, requirements);
  for (const intent::ServiceSpec& spec : intent.services) {
    const intent::PackageRequirement* requirement =
        requirements.at(spec.package_name).requirement_for(spec.qos_level, spec.version);
    decision.resource_plan[placement.at(spec.package_name)].push_back(
        registry::ResourcePlanEntry{spec.package_name, requirement->resources.cpu_millicores,
                                    requirement->resources.memory_bytes});
  }
  for (auto& [edge, entries] : decision.resource_plan) {
    (void)edge;
    std::sort(entries.begin(), entries.end(),
              [](const registry::ResourcePlanEntry& a, const registry::ResourcePlanEntry& b) {
                return a.service < b.service;
              });
  }

  for (const ValidationFinding& finding : validate_packages(hydrated, edges)) {
    decision.reasons.push_back({finding.service, finding.code, finding.detail});
  }
  for (const ResourceFinding& finding : check_resources(intent, placement, requirements, edges)) {
    decision.reasons.push_back({"", "Shortfall", finding.edge_id + " " + finding.resource + " " +
                                                     finding.detail});
  }

  // Serialize the ledger check+reserve so concurrent admissions cannot
  // double-book a shared edge.
  std::lock_guard admission_lock(ledger_.admission_mutex());
  if (decision.reasons.empty()) {
    for (const auto& [edge_id, needed] : demand) {
      const edgesim::EdgeSim* edge = edge_by_id(edges, edge_id);
      if (edge == nullptr) continue;
      edgesim::Resources available = edge->capacity();
      available -= ledger_.reserved(edge_id);
      if (!needed.fits_within(available)) {
        const std::int64_t cpu_short = std::max<std::int64_t>(0, needed.cpu_millicores -
                                                                     available.cpu_millicores);
        const std::int64_t memory_short =
            std::max<std::int64_t>(0, needed.memory_bytes - available.memory_bytes);
        decision.reasons.push_back(
            {"", "Shortfall",
             edge_id + (cpu_short > 0 ? " cpu " + quantity::format_millicores(cpu_short)
                                      : " memory " + quantity::format_bytes(memory_short)) +
                 " (reserved by other deployments)"});
      }
    }
  }

  if (!decision.reasons.empty()) {
    decision.approved = false;
    // Rejection purity: the Draft revisions vanish, published content is untouched.
    for (const HydratedPackage& package : hydrated) {
      try {
        store_.delete_revision(package.revision.repo, package.revision.name,
                               package.revision.revision);
      } catch (const CaminoError&) {
        // Draft may already be gone; rejection stays a no-op on content.
      }
    }
    return decision;
  }

  decision.approved = true;
  ledger_.reserve(intent.deployment_id, demand);

  // All-or-nothing publication. Any fault rolls back the whole deployment.
  try {
    for (const HydratedPackage& package : hydrated) {
      store_.propose(package.revision.repo, package.revision.name, package.revision.revision);
    }
    std::size_t published = 0;
    for (const std::string& service : order) {
      const auto it = std::find_if(hydrated.begin(), hydrated.end(),
                                   [&](const HydratedPackage& p) {
                                     return !p.network && p.service == service;
                                   });
      if (it == hydrated.end()) continue;
      store_.publish(it->revision.repo, it->revision.name, it->revision.revision);
      ++published;
      if (options.stage_only_first) break;
    }
    if (!options.stage_only_first || published == order.size()) {
      for (const HydratedPackage& package : hydrated) {
        if (!package.network) continue;
        store_.publish(package.revision.repo, package.revision.name, package.revision.revision);
      }
    }
  } catch (const CaminoError&) {
    for (const HydratedPackage& package : hydrated) {
      try {
        store_.delete_revision(package.revision.repo, package.revision.name,
                               package.revision.revision);
      } catch (const CaminoError&) {
      }
    }
    ledger_.release(intent.deployment_id);
    throw;
  }
  return decision;
}

TerminationCheck AdmissionController::authorize_termination(
    const intent::TerminationIntent& termination,
    const std::vector<registry::DeploymentRecord>& records) const {
  const registry::DeploymentRecord* target = nullptr;
  for (const registry::DeploymentRecord& record : records) {
    if (record.deployment_id == termination.deployment_id) {
      target = &record;
      break;
    }
  }
  if (target == nullptr) {
    throw CaminoError(Errc::UnknownDeployment,
                      "deployment '" + termination.deployment_id + "' not found");
  }

  std::set<std::string> services;
  for (const intent::ServiceSpec& spec : target->intent.services) {
    services.insert(spec.package_name);
  }

  for (const registry::DeploymentRecord& record : records) {
    if (record.deployment_id == termination.deployment_id) continue;
    if (registry::is_terminal(record.phase) || record.phase == registry::Phase::Terminating) {
      continue;
    }
    for (const intent::ServiceSpec& spec : record.intent.services) {
      for (const intent::Dependency& dep : spec.dependencies) {
        if (dep.domain == termination.domain_name && services.count(dep.after) > 0) {
          return TerminationCheck{false, record.deployment_id,
                                  record.deployment_id + "/" + spec.package_name + " depends on " +
                                      dep.after};
        }
      }
    }
  }
  return TerminationCheck{};
}

void AdmissionController::delete_deployment_revisions(const registry::DeploymentRecord& record) {
  auto remove = [&](const registry::RevisionRef& ref) {
    try {
      store_.delete_revision(ref.repo, ref.package, ref.revision);
    } catch (const CaminoError&) {
      // Already gone; deletion is idempotent.
    }
  };
  for (auto it = record.network_revisions.rbegin(); it != record.network_revisions.rend(); ++it) {
    remove(*it);
  }
  for (auto it = record.service_revisions.rbegin(); it != record.service_revisions.rend(); ++it) {
    remove(*it);
  }
}

}  // namespace camino::admission
