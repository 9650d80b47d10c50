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
#include <optional>
#include <string>
#include <vector>

#include "camino/intent.hpp"
#include "camino/store.hpp"

namespace camino::mesh {

struct Route {
  std::string from;
  std::string to;
  std::string policy{"round-robin"};

  bool operator==(const Route&) const = default;
};

struct RemoteEntry {
  std::string service;
  std::string ns;      // namespace sameness: identical on both edges
  std::string remote;  // peer edge id, or external domain name
  std::string address;
  int port{0};
  intent::Protocol protocol{intent::Protocol::Http};
  bool cross_domain{false};

  bool operator==(const RemoteEntry&) const = default;
};

struct GatewayPort {
  std::string service;
  int port{0};

  bool operator==(const GatewayPort&) const = default;
};

// East-west exposure: local services reachable from remote domains on
// deterministic ports at the domain's external address.
struct GatewayExposure {
  std::string external_address;
  std::vector<GatewayPort> exposed;  // ascending by service name

  bool operator==(const GatewayExposure&) const = default;
};

struct MeshConfig {
  std::string edge_id;
  std::vector<Route> routes;
  std::vector<RemoteEntry> remote_entries;
  std::optional<GatewayExposure> gateway;

  bool operator==(const MeshConfig&) const = default;
};

struct ProxyInjection {
  std::string service;
  bool enabled{false};

  bool operator==(const ProxyInjection&) const = default;
};

using TrustedDomainTable = std::map<std::string, std::string>;  // domain -> fqdn

struct MeshOptions {
  std::string external_address{"gateway.local"};
  int gateway_base_port{15443};
  int cross_domain_port{15443};
};

// Hint (an intent-embedded fqdn) wins; the trusted table is the fallback.
// Throws UnresolvableDomain.
std::string resolve_domain(const std::string& name, const TrustedDomainTable& trusted,
                           const std::optional<std::string>& hint);

// Translates a network intent plus placement into per-edge mesh objects:
//   intra-edge link   -> Route on that edge
//   inter-edge link   -> Route + RemoteEntry on each side, names resolved
//                        under namespace sameness
//   cross-domain link -> RemoteEntry with the external fqdn plus a
//                        GatewayExposure on the local edge
// Throws UnresolvableDomain / DanglingLink.
std::map<std::string, MeshConfig> plan_mesh(const intent::NetworkIntent& net,
                                            const intent::PlacementMap& placement,
                                            const TrustedDomainTable& trusted,
                                            const MeshOptions& options = {});

// Proxy sidecars are injected exactly into services with link degree >= 1.
std::vector<ProxyInjection> proxy_injections(const intent::NetworkIntent& net);

struct Unreachable {
  std::string from;
  std::string to;
  std::string reason;

  bool operator==(const Unreachable&) const = default;
};

// Walks every directed link through the planned objects: a local route for
// intra-edge, route plus remote entry for inter-edge, remote entry plus
// gateway exposure for cross-domain.
std::vector<Unreachable> check_reachability(const std::map<std::string, MeshConfig>& configs,
                                            const intent::NetworkIntent& net,
                                            const intent::PlacementMap& placement);

struct NetworkPackageSpec {
  std::string deployment_id;
  std::string ns;
  std::string blueprint_repo;                      // holds mesh-route / mesh-remote-entry / mesh-gateway
  std::map<std::string, std::string> target_repos;  // edge id -> deployment repo
};

// Assembles one hydrated network package per non-empty edge config from the
// mesh blueprint packages and stores it as a Draft in that edge's
// deployment repository. Hydration errors propagate.
std::vector<store::PackageRevision> hydrate_network_packages(
    const std::map<std::string, MeshConfig>& configs, store::PackageStore& store,
    const NetworkPackageSpec& spec);

std::string to_json_text(const MeshConfig& config);

}  // namespace camino::mesh
