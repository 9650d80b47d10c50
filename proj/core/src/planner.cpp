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

#include "camino/planner.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "camino/errors.hpp"

namespace camino::planner {

const GraphNode* DependencyGraph::node(const std::string& key) const {
  for (const GraphNode& n : nodes) {
    if (n.key == key) return &n;
  }
  return nullptr;
}

DependencyGraph build_graph(const intent::DeploymentIntent& intent) {
  DependencyGraph graph;
  std::set<std::string> seen;
  for (const intent::ServiceSpec& spec : intent.services) {
    graph.nodes.push_back({spec.package_name, spec.package_name, "", false});
    seen.insert(spec.package_name);
  }
  for (const intent::ServiceSpec& spec : intent.services) {
    for (const intent::Dependency& dep : spec.dependencies) {
      std::string from;
      if (dep.domain == intent.domain_name) {
        from = dep.after;
      } else {
        from = "ext:" + dep.domain + "/" + dep.after;
        if (seen.insert(from).second) {
          graph.nodes.push_back({from, dep.after, dep.domain, true});
        }
      }
      graph.edges.emplace_back(from, spec.package_name);
    }
  }
  return graph;
}

namespace {

// Every residual node keeps at least one residual predecessor, so walking
// predecessors never dead-ends and must revisit a node; the revisited
// segment, reversed, is a forward cycle.
std::vector<std::string> extract_cycle(const std::map<std::string, std::vector<std::string>>& successors,
                                       const std::set<std::string>& residual) {
  std::map<std::string, std::vector<std::string>> predecessors;
  for (const auto& [from, to_list] : successors) {
    for (const std::string& to : to_list) predecessors[to].push_back(from);
  }
  std::vector<std::string> path;
  std::map<std::string, std::size_t> position;
  std::string current = *residual.begin();
  while (position.find(current) == position.end()) {
    position[current] = path.size();
    path.push_back(current);
    for (const std::string& pred : predecessors.at(current)) {
      if (residual.count(pred) > 0) {
        current = pred;
        break;
      }
    }
  }
  std::vector<std::string> cycle(path.begin() + static_cast<std::ptrdiff_t>(position.at(current)),
                                 path.end());
  std::reverse(cycle.begin(), cycle.end());
  return cycle;
}

}  // namespace

std::vector<std::string> order_services(const DependencyGraph& graph) {
  std::map<std::string, std::size_t> indegree;
  std::map<std::string, std::vector<std::string>> successors;
  for (const GraphNode& node : graph.nodes) {
    if (!node.external) indegree[node.key] = 0;
  }
  for (const auto& [from, to] : graph.edges) {
    const GraphNode* source = graph.node(from);
    if (source == nullptr || source->external) continue;  // external deps are satisfied
    successors[from].push_back(to);
    ++indegree[to];
  }

  std::set<std::string> ready;
  for (const auto& [key, degree] : indegree) {
    if (degree == 0) ready.insert(key);
  }

  std::vector<std::string> order;
  order.reserve(indegree.size());
  while (!ready.empty()) {
    const std::string next = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(next);
    const auto it = successors.find(next);
    if (it == successors.end()) continue;
    for (const std::string& succ : it->second) {
      if (--indegree[succ] == 0) ready.insert(succ);
    }
  }

  if (order.size() != indegree.size()) {
    std::set<std::string> residual;
    std::set<std::string> done(order.begin(), order.end());
    for (const auto& [key, degree] : indegree) {
      (void)degree;
      if (done.count(key) == 0) residual.insert(key);
    }
    throw CycleError(extract_cycle(successors, residual));
  }
  return order;
}

intent::PlacementMap place_services(
    const intent::DeploymentIntent& intent,
    const std::map<std::string, intent::PackageDescriptor>& requirements,
    const std::vector<EdgeInventory>& inventory) {
  struct Request {
    std::string service;
    std::int64_t cpu_millicores;
    std::int64_t memory_bytes;
  };

  std::vector<Request> requests;
  requests.reserve(intent.services.size());
  for (const intent::ServiceSpec& spec : intent.services) {
    const auto it = requirements.find(spec.package_name);
    if (it == requirements.end()) {
      throw CaminoError(Errc::SemanticError, "no descriptor for service " + spec.package_name);
    }
    const intent::PackageRequirement* req =
        it->second.requirement_for(spec.qos_level, spec.version);
    if (req == nullptr) {
      throw CaminoError(Errc::SemanticError, "descriptor for " + spec.package_name +
                                                 " has no requirement for qos '" + spec.qos_level +
                                                 "' revision " + spec.version);
    }
    requests.push_back({spec.package_name, req->resources.cpu_millicores, req->resources.memory_bytes});
  }

  std::sort(requests.begin(), requests.end(), [](const Request& a, const Request& b) {
    if (a.cpu_millicores != b.cpu_millicores) return a.cpu_millicores > b.cpu_millicores;
    return a.service < b.service;
  });

  std::vector<EdgeInventory> edges = inventory;
  intent::PlacementMap placement;
  for (const Request& request : requests) {
    std::sort(edges.begin(), edges.end(), [](const EdgeInventory& a, const EdgeInventory& b) {
      if (a.free_cpu_millicores != b.free_cpu_millicores) {
        return a.free_cpu_millicores > b.free_cpu_millicores;
      }
      return a.edge_id < b.edge_id;
    });
    bool placed = false;
    for (EdgeInventory& edge : edges) {
      if (edge.free_cpu_millicores >= request.cpu_millicores &&
          edge.free_memory_bytes >= request.memory_bytes) {
        edge.free_cpu_millicores -= request.cpu_millicores;
        edge.free_memory_bytes -= request.memory_bytes;
        placement[request.service] = edge.edge_id;
        placed = true;
        break;
      }
    }
    if (!placed) {
      std::vector<EdgeShortfall> shortfalls;
      shortfalls.reserve(edges.size());
      std::vector<const EdgeInventory*> sorted;
      for (const EdgeInventory& edge : edges) sorted.push_back(&edge);
      std::sort(sorted.begin(), sorted.end(),
                [](const EdgeInventory* a, const EdgeInventory* b) { return a->edge_id < b->edge_id; });
      for (const EdgeInventory* edge : sorted) {
        EdgeShortfall shortfall;
        shortfall.edge_id = edge->edge_id;
        shortfall.cpu_millicores = std::max<std::int64_t>(0, request.cpu_millicores - edge->free_cpu_millicores);
        shortfall.memory_bytes = std::max<std::int64_t>(0, request.memory_bytes - edge->free_memory_bytes);
        shortfalls.push_back(shortfall);
      }
      throw CapacityError(request.service, std::move(shortfalls));
    }
  }
  return placement;
}

}  // namespace camino::planner
