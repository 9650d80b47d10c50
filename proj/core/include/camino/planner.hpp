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
#include <map>
#include <string>
#include <vector>

#include "camino/intent.hpp"

namespace camino::planner {

struct GraphNode {
  std::string key;     // service name, or "ext:<domain>/<package>" for pseudo-nodes
  std::string name;    // package name
  std::string domain;  // owning domain (empty for local nodes)
  bool external{false};

  bool operator==(const GraphNode&) const = default;
};

// Directed dependency graph over "after" labels. Edges point predecessor ->
// dependent. External predecessors become pseudo-nodes with no incoming
// edges; they never gate local ordering.
struct DependencyGraph {
  std::vector<GraphNode> nodes;
  std::vector<std::pair<std::string, std::string>> edges;  // node keys

  const GraphNode* node(const std::string& key) const;
};

DependencyGraph build_graph(const intent::DeploymentIntent& intent);

// Deterministic Kahn ordering of the local nodes: among ready nodes the
// lexicographically smallest name goes first. External pseudo-nodes are
// treated as already satisfied and removed before ordering.
// Throws CycleError carrying one witness cycle.
std::vector<std::string> order_services(const DependencyGraph& graph);

struct EdgeInventory {
  std::string edge_id;
  std::int64_t free_cpu_millicores{0};
  std::int64_t free_memory_bytes{0};
};

// First-fit-decreasing placement: services sorted by cpu request descending
// (ties by name), edges re-sorted before every assignment by free cpu
// descending (ties by id); assignments debit a working copy of the
// inventory. The descriptor requirement is selected by the service's
// qos_level and version. Throws CapacityError naming the first unplaceable
// service, and SemanticError when a descriptor or requirement is missing.
intent::PlacementMap place_services(
    const intent::DeploymentIntent& intent,
    const std::map<std::string, intent::PackageDescriptor>& requirements,
    const std::vector<EdgeInventory>& inventory);

}  // namespace camino::planner
