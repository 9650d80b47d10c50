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

#include "camino/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <json.hpp>

#include "camino/errors.hpp"

namespace camino::mesh {
namespace {

using nlohmann::ordered_json;

std::string lowercase(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return text;
}

const intent::Endpoint& first_endpoint(const intent::NetworkService& service) {
  if (service.endpoints.empty()) {
    throw CaminoError(Errc::MissingEndpointMetadata, "service " + service.name + " has no endpoints");
  }
  return service.endpoints.front();
}

const store::PackageRevision* find_blueprint(const std::vector<store::PackageRevision>& published,
                                             std::string_view package) {
  for (const store::PackageRevision& revision : published) {
    if (revision.name == package) return &revision;
  }
  return nullptr;
}

manifest::Document bind_strict(const manifest::Document& doc,
                               const std::map<std::string, manifest::ScalarValue>& bindings) {
  std::set<std::string> resolved;
  std::set<std::string> unresolved;
  manifest::Document out = manifest::bind(doc, bindings, resolved, unresolved);
  if (!unresolved.empty()) {
    throw CaminoError(Errc::UnresolvedSetter, *unresolved.begin());
  }
  for (const auto& [param, value] : bindings) {
    (void)value;
    if (resolved.count(param) == 0) {
      throw CaminoError(Errc::UnknownParameter, "binding '" + param + "' matches no annotation");
    }
  }
  return out;
}

}  // namespace

std::string resolve_domain(const std::string& name, const TrustedDomainTable& trusted,
                           const std::optional<std::string>& hint) {
  if (hint && !hint->empty()) return *hint;
  const auto it = trusted.find(name);
  if (it == trusted.end()) {
    throw CaminoError(Errc::UnresolvableDomain, "domain '" + name + "' has no fqdn");
  }
  return it->second;
}

std::map<std::string, MeshConfig> plan_mesh(const intent::NetworkIntent& net,
                                            const intent::PlacementMap& placement,
                                            const TrustedDomainTable& trusted,
                                            const MeshOptions& options) {
  const std::string ns = intent::deployment_namespace(net.deployment_id);
  std::map<std::string, MeshConfig> configs;
  std::map<std::string, std::set<std::string>> exposed;  // edge -> services

  auto config_for = [&](const std::string& edge) -> MeshConfig& {
    MeshConfig& config = configs[edge];
    config.edge_id = edge;
    return config;
  };

  for (const intent::NetworkService& service : net.services) {
    const auto placed = placement.find(service.name);
    if (placed == placement.end()) {
      throw CaminoError(Errc::UnplacedService, service.name + " has no edge assignment");
    }
    const std::string& edge = placed->second;

    for (const intent::Link& link : service.links_to) {
      if (link.type == intent::LinkType::CrossDomain) {
        const std::string address = resolve_domain(
            link.resolution->domain, trusted,
            link.resolution->fqdn.empty() ? std::nullopt : std::make_optional(link.resolution->fqdn));
        MeshConfig& config = config_for(edge);
        RemoteEntry entry;
        entry.service = link.name;
        entry.ns = ns;
        entry.remote = link.resolution->domain;
        entry.address = address;
        entry.port = options.cross_domain_port;
        entry.protocol = intent::Protocol::Tcp;
        entry.cross_domain = true;
        config.remote_entries.push_back(std::move(entry));
        exposed[edge].insert(service.name);
        continue;
      }

      const intent::NetworkService* peer = net.service(link.name);
      if (peer == nullptr) {
        throw CaminoError(Errc::DanglingLink,
                          service.name + " links to unknown service " + link.name);
      }
      const auto peer_placed = placement.find(peer->name);
      if (peer_placed == placement.end()) {
        throw CaminoError(Errc::UnplacedService, peer->name + " has no edge assignment");
      }

      MeshConfig& config = config_for(edge);
      if (link.type == intent::LinkType::IntraEdge) {
        // One route object per local pair; both sides of the symmetric link
        // canonicalize to the same record.
        const std::string& from = std::min(service.name, link.name);
        const std::string& to = std::max(service.name, link.name);
        config.routes.push_back(Route{from, to, "round-robin"});
      } else {
        config.routes.push_back(Route{service.name, link.name, "round-robin"});
      }
      if (link.type == intent::LinkType::InterEdge) {
        const intent::Endpoint& endpoint = first_endpoint(*peer);
        RemoteEntry entry;
        entry.service = peer->name;
        entry.ns = ns;
        entry.remote = peer_placed->second;
        entry.address =
            endpoint.host + "." + ns + ".svc." + lowercase(peer_placed->second) + ".local";
        entry.port = endpoint.port;
        entry.protocol = endpoint.protocol;
        config.remote_entries.push_back(std::move(entry));
      }
    }
  }

  for (auto& [edge, services] : exposed) {
    GatewayExposure gateway;
    gateway.external_address = options.external_address;
    int port = options.gateway_base_port;
    for (const std::string& service : services) {  // std::set iterates ascending
      gateway.exposed.push_back(GatewayPort{service, port++});
    }
    configs[edge].gateway = std::move(gateway);
  }

  for (auto& [edge, config] : configs) {
    (void)edge;
    std::sort(config.routes.begin(), config.routes.end(), [](const Route& a, const Route& b) {
      return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    config.routes.erase(std::unique(config.routes.begin(), config.routes.end()), config.routes.end());
    std::sort(config.remote_entries.begin(), config.remote_entries.end(),
              [](const RemoteEntry& a, const RemoteEntry& b) {
                return std::tie(a.service, a.remote) < std::tie(b.service, b.remote);
              });
    config.remote_entries.erase(std::unique(config.remote_entries.begin(), config.remote_entries.end()),
                                config.remote_entries.end());
  }
  return configs;
}

std::vector<ProxyInjection> proxy_injections(const intent::NetworkIntent& net) {
  std::vector<ProxyInjection> out;
  out.reserve(net.services.size());
  for (const intent::NetworkService& service : net.services) {
    out.push_back(ProxyInjection{service.name, !service.links_to.empty()});
  }
  std::sort(out.begin(), out.end(),
            [](const ProxyInjection& a, const ProxyInjection& b) { return a.service < b.service; });
  return out;
}

std::vector<Unreachable> check_reachability(const std::map<std::string, MeshConfig>& configs,
                                            const intent::NetworkIntent& net,
                                            const intent::PlacementMap& placement) {
  std::vector<Unreachable> findings;
  const MeshConfig empty;
  auto config_of = [&](const std::string& edge) -> const MeshConfig& {
    const auto it = configs.find(edge);
    return it == configs.end() ? empty : it->second;
  };
  // Intra-edge routes are canonical-undirected; accept either orientation.
  auto has_route = [](const MeshConfig& config, const std::string& from, const std::string& to,
                      bool undirected) {
    return std::any_of(config.routes.begin(), config.routes.end(), [&](const Route& route) {
      if (route.from == from && route.to == to) return true;
      return undirected && route.from == to && route.to == from;
    });
  };
  auto has_entry = [](const MeshConfig& config, const std::string& service, const std::string& remote) {
    return std::any_of(config.remote_entries.begin(), config.remote_entries.end(),
                       [&](const RemoteEntry& entry) {
                         return entry.service == service && entry.remote == remote;
                       });
  };

  for (const intent::NetworkService& service : net.services) {
    const auto placed = placement.find(service.name);
    if (placed == placement.end()) {
      findings.push_back({service.name, "", "service has no edge assignment"});
      continue;
    }
    const MeshConfig& config = config_of(placed->second);
    for (const intent::Link& link : service.links_to) {
      switch (link.type) {
        case intent::LinkType::IntraEdge:
          if (!has_route(config, service.name, link.name, /*undirected=*/true)) {
            findings.push_back({service.name, link.name, "missing local route"});
          }
          break;
        case intent::LinkType::InterEdge: {
          const auto peer_placed = placement.find(link.name);
          const std::string peer_edge =
              peer_placed == placement.end() ? std::string{} : peer_placed->second;
          if (!has_route(config, service.name, link.name, /*undirected=*/false)) {
            findings.push_back({service.name, link.name, "missing local route"});
          } else if (!has_entry(config, link.name, peer_edge)) {
            findings.push_back({service.name, link.name, "missing remote entry"});
          }
          break;
        }
        case intent::LinkType::CrossDomain: {
          if (!has_entry(config, link.name, link.resolution->domain)) {
            findings.push_back({service.name, link.name, "missing remote entry"});
            break;
          }
          const bool gateway_covers =
              config.gateway.has_value() &&
              std::any_of(config.gateway->exposed.begin(), config.gateway->exposed.end(),
                          [&](const GatewayPort& p) { return p.service == service.name; });
          if (!gateway_covers) {
            findings.push_back({service.name, link.name, "missing gateway exposure"});
          }
          break;
        }
      }
    }
  }
  return findings;
}

std::vector<store::PackageRevision> hydrate_network_packages(
    const std::map<std::string, MeshConfig>& configs, store::PackageStore& store,
    const NetworkPackageSpec& spec) {
  std::vector<store::PackageRevision> out;
  const std::vector<store::PackageRevision> published = store.published_latest(spec.blueprint_repo);

  for (const auto& [edge, config] : configs) {
    if (config.routes.empty() && config.remote_entries.empty() && !config.gateway) continue;
    const auto repo_it = spec.target_repos.find(edge);
    if (repo_it == spec.target_repos.end()) {
      throw CaminoError(Errc::EngineError, "no deployment repository for edge " + edge);
    }

    std::vector<manifest::Document> manifests;
    const store::PackageRevision* upstream = nullptr;

    if (!config.routes.empty()) {
      const store::PackageRevision* blueprint = find_blueprint(published, "mesh-route");
      if (blueprint == nullptr) {
        throw CaminoError(Errc::UnknownRevision, "mesh-route blueprint is not published");
      }
      upstream = blueprint;
      for (const Route& route : config.routes) {
        for (const manifest::Document& doc : blueprint->manifests) {
          manifests.push_back(bind_strict(doc, {{"namespace", spec.ns},
                                                {"route-from", route.from},
                                                {"route-to", route.to},
                                                {"route-policy", route.policy}}));
        }
      }
    }
    if (!config.remote_entries.empty()) {
      const store::PackageRevision* blueprint = find_blueprint(published, "mesh-remote-entry");
      if (blueprint == nullptr) {
        throw CaminoError(Errc::UnknownRevision, "mesh-remote-entry blueprint is not published");
      }
      if (upstream == nullptr) upstream = blueprint;
      for (const RemoteEntry& entry : config.remote_entries) {
        for (const manifest::Document& doc : blueprint->manifests) {
          manifests.push_back(bind_strict(
              doc, {{"namespace", spec.ns},
                    {"re-service", entry.service},
                    {"re-remote", entry.remote},
                    {"re-address", entry.address},
                    {"re-port", static_cast<std::int64_t>(entry.port)},
                    {"re-protocol", std::string(intent::to_string(entry.protocol))},
                    {"re-cross-domain", entry.cross_domain}}));
        }
      }
    }
    if (config.gateway) {
      const store::PackageRevision* blueprint = find_blueprint(published, "mesh-gateway");
      if (blueprint == nullptr) {
        throw CaminoError(Errc::UnknownRevision, "mesh-gateway blueprint is not published");
      }
      if (upstream == nullptr) upstream = blueprint;
      for (const GatewayPort& port : config.gateway->exposed) {
        for (const manifest::Document& doc : blueprint->manifests) {
          manifests.push_back(bind_strict(
              doc, {{"namespace", spec.ns},
                    {"gw-service", port.service},
                    {"gw-port", static_cast<std::int64_t>(port.port)},
                    {"gw-address", config.gateway->external_address}}));
        }
      }
    }

    const std::string package = spec.deployment_id + ".mesh." + lowercase(edge);
    int max_number = 0;
    for (const store::PackageRevision& revision : store.revisions(repo_it->second)) {
      if (revision.name != package) continue;
      const int number = std::stoi(revision.revision.substr(1));
      max_number = std::max(max_number, number);
    }
    store::PackageStore::RevisionMeta meta;
    meta.deployment_id = spec.deployment_id;
    meta.service = "mesh";
    if (upstream != nullptr) {
      meta.upstream = store::UpstreamRef{spec.blueprint_repo, upstream->name, upstream->revision};
    }
    out.push_back(store.create_revision(repo_it->second, package,
                                        "v" + std::to_string(max_number + 1), std::move(manifests),
                                        meta));
  }
  return out;
}

std::string to_json_text(const MeshConfig& config) {
  ordered_json doc;
  doc["edge_id"] = config.edge_id;
  doc["routes"] = ordered_json::array();
  for (const Route& route : config.routes) {
    doc["routes"].push_back({{"from", route.from}, {"to", route.to}, {"policy", route.policy}});
  }
  doc["remote_entries"] = ordered_json::array();
  for (const RemoteEntry& entry : config.remote_entries) {
    doc["remote_entries"].push_back({{"service", entry.service},
                                     {"namespace", entry.ns},
                                     {"remote", entry.remote},
                                     {"address", entry.address},
                                     {"port", entry.port},
                                     {"protocol", intent::to_string(entry.protocol)},
                                     {"cross_domain", entry.cross_domain}});
  }
  if (config.gateway) {
    ordered_json gateway;
    gateway["external_address"] = config.gateway->external_address;
    gateway["exposed"] = ordered_json::array();
    for (const GatewayPort& port : config.gateway->exposed) {
      gateway["exposed"].push_back({{"service", port.service}, {"port", port.port}});
    }
    doc["gateway"] = std::move(gateway);
  }
  return doc.dump(2);
}

}  // namespace camino::mesh
