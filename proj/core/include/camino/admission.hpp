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

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "camino/edge.hpp"
#include "camino/intent.hpp"
#include "camino/registry.hpp"
#include "camino/store.hpp"

namespace camino::admission {

struct ValidationFinding {
  std::string service;
  std::string code;  // DialectError | UnresolvedSetter | SchemaError | UnknownKind | MissingCapability
  std::string detail;

  bool operator==(const ValidationFinding&) const = default;
};

struct ResourceFinding {
  std::string edge_id;
  std::string resource;  // "cpu" | "memory"
  std::int64_t shortfall{0};
  std::string detail;

  bool operator==(const ResourceFinding&) const = default;
};

// Per-edge reservations held from admission until a deployment terminates.
// Simulator commitments never exceed reservations, so checking the ledger is
// what prevents double-booking between concurrent admissions.
class ResourceLedger {
 public:
  void reserve(const std::string& deployment_id,
               const std::map<std::string, edgesim::Resources>& per_edge);
  void release(const std::string& deployment_id);
  bool holds(const std::string& deployment_id) const;
  edgesim::Resources reserved(const std::string& edge_id) const;
  edgesim::Resources total() const;

  std::mutex& admission_mutex() { return admission_mutex_; }

 private:
  std::map<std::string, std::map<std::string, edgesim::Resources>> reservations_;
  mutable std::mutex mutex_;
  std::mutex admission_mutex_;  // serializes check+reserve across admissions
};

struct HydratedPackage {
  store::PackageRevision revision;
  std::string service;
  std::string edge;
  bool network{false};
};

struct AdmitOptions {
  // Sequencing-on-readiness: publish only the first service package now;
  // the caller publishes the rest as predecessors reach Running.
  bool stage_only_first{false};
};

struct TerminationCheck {
  bool approved{true};
  std::string conflicting_deployment;
  std::string detail;
};

class AdmissionController {
 public:
  AdmissionController(store::PackageStore& store, ResourceLedger& ledger);

  // Dry-run validation of hydrated Draft packages against their target
  // edges: dialect re-validation, unresolved-setter scan, manifest shape and
  // capability checks. Findings, not exceptions.
  std::vector<ValidationFinding> validate_packages(
      const std::vector<HydratedPackage>& hydrated,
      const std::vector<const edgesim::EdgeSim*>& edges) const;

  // Re-verifies the placement against live edge state (capacity minus
  // committed), reporting per-edge shortfalls.
  std::vector<ResourceFinding> check_resources(
      const intent::DeploymentIntent& intent, const intent::PlacementMap& placement,
      const std::map<std::string, intent::PackageDescriptor>& requirements,
      const std::vector<const edgesim::EdgeSim*>& edges) const;

  // Whole-intent admission: Approved iff validation and resource checks are
  // both clean. On approval every package moves Draft -> Proposed and the
  // service packages publish in deployment order, then the network packages;
  // the deployment's resources are reserved in the ledger. On rejection the
  // Draft revisions are deleted and no repository's published content
  // changes. A publication fault rolls back every revision of this
  // deployment, releases the reservation, and rethrows StorageError.
  registry::AdmissionDecision admit(const intent::DeploymentIntent& intent,
                                    const std::vector<std::string>& order,
                                    const intent::PlacementMap& placement,
                                    const std::map<std::string, intent::PackageDescriptor>& requirements,
                                    const std::vector<HydratedPackage>& hydrated,
                                    const std::vector<const edgesim::EdgeSim*>& edges,
                                    const AdmitOptions& options = {});

  // Conflict iff another active deployment declares an "after" dependency on
  // any service of this deployment. Deletion is the caller's step.
  TerminationCheck authorize_termination(const intent::TerminationIntent& termination,
                                         const std::vector<registry::DeploymentRecord>& records) const;

  // Removes a deployment's revisions: network packages first, then services
  // in reverse deployment order. Missing revisions are skipped.
  void delete_deployment_revisions(const registry::DeploymentRecord& record);

 private:
  store::PackageStore& store_;
  ResourceLedger& ledger_;
};

}  // namespace camino::admission
