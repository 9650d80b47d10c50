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

#include "camino/intent.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include <json.hpp>

#include "camino/errors.hpp"
#include "camino/quantity.hpp"

namespace camino::intent {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_json(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw CaminoError(Errc::SyntaxError, "malformed JSON");
  return doc;
}

// Strict schema: every key must be known, required keys must be present.
void check_keys(const json& obj, const char* context, const std::set<std::string>& required,
                const std::set<std::string>& optional = {}) {
  if (!obj.is_object()) throw CaminoError(Errc::SchemaError, std::string(context) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (required.count(key) == 0 && optional.count(key) == 0) {
      throw CaminoError(Errc::SchemaError, std::string(context) + ": unknown field '" + key + "'");
    }
  }
  for (const std::string& key : required) {
    if (!obj.contains(key)) {
      throw CaminoError(Errc::SchemaError, std::string(context) + ": missing field '" + key + "'");
    }
  }
}

std::string get_string(const json& obj, const char* key, const char* context) {
  const auto& value = obj.at(key);
  if (!value.is_string()) {
    throw CaminoError(Errc::SchemaError, std::string(context) + ": '" + key + "' must be a string");
  }
  return value.get<std::string>();
}

std::string get_nonempty_string(const json& obj, const char* key, const char* context) {
  std::string value = get_string(obj, key, context);
  if (value.empty()) {
    throw CaminoError(Errc::SchemaError, std::string(context) + ": '" + key + "' must be non-empty");
  }
  return value;
}

const std::regex kVersionPattern{R"(v[1-9][0-9]*)"};
const std::regex kTimestampPattern{
    R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?(Z|[+-]\d{2}:\d{2})?)"};

}  // namespace

const ServiceSpec* DeploymentIntent::service(std::string_view package_name) const {
  for (const ServiceSpec& s : services) {
    if (s.package_name == package_name) return &s;
  }
  return nullptr;
}

DeploymentIntent parse_deployment_intent(std::string_view json_text) {
  const json doc = parse_json(json_text);
  check_keys(doc, "intent", {"domain_name", "deployment_id", "timestamp", "services"});

  DeploymentIntent intent;
  intent.domain_name = get_nonempty_string(doc, "domain_name", "intent");
  intent.deployment_id = get_nonempty_string(doc, "deployment_id", "intent");
  intent.timestamp = get_nonempty_string(doc, "timestamp", "intent");
  if (!std::regex_match(intent.timestamp, kTimestampPattern)) {
    throw CaminoError(Errc::SchemaError, "intent: 'timestamp' is not an ISO-8601 instant");
  }

  const auto& services = doc.at("services");
  if (!services.is_array() || services.empty()) {
    throw CaminoError(Errc::SchemaError, "intent: 'services' must be a non-empty array");
  }

  for (const auto& entry : services) {
    check_keys(entry, "service", {"package_name", "version"}, {"qos_level", "dependencies"});
    ServiceSpec spec;
    spec.package_name = get_nonempty_string(entry, "package_name", "service");
    spec.version = get_nonempty_string(entry, "version", "service");
    if (!std::regex_match(spec.version, kVersionPattern)) {
      throw CaminoError(Errc::SchemaError,
                        "service " + spec.package_name + ": version must match v<positive integer>");
    }
    if (entry.contains("qos_level")) {
      spec.qos_level = get_nonempty_string(entry, "qos_level", "service");
    }
    if (entry.contains("dependencies")) {
      const auto& deps = entry.at("dependencies");
      if (!deps.is_array()) {
        throw CaminoError(Errc::SchemaError, "service " + spec.package_name +
                                                 ": 'dependencies' must be an array");
      }
      for (const auto& dep_entry : deps) {
        check_keys(dep_entry, "dependency", {"after", "domain"}, {"fqdn"});
        Dependency dep;
        dep.after = get_nonempty_string(dep_entry, "after", "dependency");
        dep.domain = get_nonempty_string(dep_entry, "domain", "dependency");
        if (dep_entry.contains("fqdn")) dep.fqdn = get_string(dep_entry, "fqdn", "dependency");
        spec.dependencies.push_back(std::move(dep));
      }
    }
    intent.services.push_back(std::move(spec));
  }

  // Relational invariants.
  std::set<std::string> names;
  for (const ServiceSpec& spec : intent.services) {
    if (!names.insert(spec.package_name).second) {
      throw CaminoError(Errc::SemanticError, "duplicate package_name '" + spec.package_name + "'");
    }
  }
  for (const ServiceSpec& spec : intent.services) {
    for (const Dependency& dep : spec.dependencies) {
      const bool local = dep.domain == intent.domain_name;
      if (local && dep.after == spec.package_name) {
        throw CaminoError(Errc::SemanticError,
                          "service " + spec.package_name + " depends on itself");
      }
      if (local && names.count(dep.after) == 0) {
        throw CaminoError(Errc::SemanticError, "service " + spec.package_name +
                                                   ": 'after' names unknown service '" + dep.after + "'");
      }
      if (!local && dep.fqdn.empty()) {
        throw CaminoError(Errc::SemanticError, "service " + spec.package_name +
                                                   ": external dependency on " + dep.after +
                                                   " requires an fqdn");
      }
    }
  }
  return intent;
}

std::string to_json_text(const DeploymentIntent& intent) {
  ordered_json doc;
  doc["domain_name"] = intent.domain_name;
  doc["deployment_id"] = intent.deployment_id;
  doc["timestamp"] = intent.timestamp;
  doc["services"] = ordered_json::array();
  for (const ServiceSpec& spec : intent.services) {
    ordered_json s;
    s["package_name"] = spec.package_name;
    s["version"] = spec.version;
    s["qos_level"] = spec.qos_level;
    if (!spec.dependencies.empty()) {
      s["dependencies"] = ordered_json::array();
      for (const Dependency& dep : spec.dependencies) {
        ordered_json d;
        d["after"] = dep.after;
        d["domain"] = dep.domain;
        if (!dep.fqdn.empty()) d["fqdn"] = dep.fqdn;
        s["dependencies"].push_back(std::move(d));
      }
    }
    doc["services"].push_back(std::move(s));
  }
  return doc.dump(2);
}

TerminationIntent parse_termination_intent(std::string_view json_text) {
  const json doc = parse_json(json_text);
  check_keys(doc, "termination", {"deployment_id", "domain_name"});
  TerminationIntent t;
  t.deployment_id = get_nonempty_string(doc, "deployment_id", "termination");
  t.domain_name = get_nonempty_string(doc, "domain_name", "termination");
  return t;
}

const PackageRequirement* PackageDescriptor::requirement_for(std::string_view qos,
                                                             std::string_view revision) const {
  for (const PackageRequirement& req : requirements) {
    if (req.qos == qos && req.revision == revision) return &req;
  }
  return nullptr;
}

namespace {

RawScalar parse_cpu_field(const json& value, std::int64_t& millicores) {
  if (value.is_number_integer()) {
    const auto cores = value.get<std::int64_t>();
    millicores = quantity::parse_cpu_millicores(cores);
    return RawScalar{cores};
  }
  if (value.is_string()) {
    const auto text = value.get<std::string>();
    millicores = quantity::parse_cpu_millicores(text);
    return RawScalar{text};
  }
  throw CaminoError(Errc::QuantityError, "cpu must be an integer or '<n>m' string");
}

RawScalar parse_memory_field(const json& value, std::int64_t& bytes) {
  if (value.is_number_integer()) {
    const auto raw = value.get<std::int64_t>();
    if (raw <= 0) throw CaminoError(Errc::QuantityError, "memory must be positive");
    bytes = raw;
    return RawScalar{raw};
  }
  if (value.is_string()) {
    const auto text = value.get<std::string>();
    bytes = quantity::parse_memory_bytes(text);
    return RawScalar{text};
  }
  throw CaminoError(Errc::QuantityError, "memory must be an integer or suffixed string");
}

}  // namespace

PackageDescriptor parse_package_descriptor(std::string_view json_text) {
  const json doc = parse_json(json_text);
  check_keys(doc, "descriptor", {"name", "package_requirements"});

  PackageDescriptor descriptor;
  descriptor.name = get_nonempty_string(doc, "name", "descriptor");
  const auto& requirements = doc.at("package_requirements");
  if (!requirements.is_array() || requirements.empty()) {
    throw CaminoError(Errc::SchemaError, "descriptor: 'package_requirements' must be a non-empty array");
  }
  for (const auto& entry : requirements) {
    check_keys(entry, "package_requirement", {"qos", "revision", "package_resources"});
    PackageRequirement req;
    req.qos = get_nonempty_string(entry, "qos", "package_requirement");
    req.revision = get_nonempty_string(entry, "revision", "package_requirement");
    if (!std::regex_match(req.revision, kVersionPattern)) {
      throw CaminoError(Errc::SchemaError, "package_requirement: revision must match v<positive integer>");
    }
    const auto& resources = entry.at("package_resources");
    check_keys(resources, "package_resources", {"container", "cpu", "memory"});
    req.resources.container = get_nonempty_string(resources, "container", "package_resources");
    req.resources.cpu_raw = parse_cpu_field(resources.at("cpu"), req.resources.cpu_millicores);
    req.resources.memory_raw = parse_memory_field(resources.at("memory"), req.resources.memory_bytes);
    descriptor.requirements.push_back(std::move(req));
  }
  return descriptor;
}

std::string to_json_text(const PackageDescriptor& descriptor) {
  ordered_json doc;
  doc["name"] = descriptor.name;
  doc["package_requirements"] = ordered_json::array();
  for (const PackageRequirement& req : descriptor.requirements) {
    ordered_json r;
    r["qos"] = req.qos;
    r["revision"] = req.revision;
    ordered_json res;
    res["container"] = req.resources.container;
    if (std::holds_alternative<std::int64_t>(req.resources.cpu_raw)) {
      res["cpu"] = std::get<std::int64_t>(req.resources.cpu_raw);
    } else {
      res["cpu"] = std::get<std::string>(req.resources.cpu_raw);
    }
    if (std::holds_alternative<std::int64_t>(req.resources.memory_raw)) {
      res["memory"] = std::get<std::int64_t>(req.resources.memory_raw);
    } else {
      res["memory"] = std::get<std::string>(req.resources.memory_raw);
    }
    r["package_resources"] = std::move(res);
    doc["package_requirements"].push_back(std::move(r));
  }
  return doc.dump(2);
}

Protocol protocol_from_string(std::string_view text) {
  if (text == "HTTP") return Protocol::Http;
  if (text == "TCP") return Protocol::Tcp;
  if (text == "UDP") return Protocol::Udp;
  if (text == "GRPC") return Protocol::Grpc;
  throw CaminoError(Errc::SchemaError, "unknown protocol '" + std::string(text) + "'");
}

const char* to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::Http: return "HTTP";
    case Protocol::Tcp: return "TCP";
    case Protocol::Udp: return "UDP";
    case Protocol::Grpc: return "GRPC";
  }
  return "HTTP";
}

LinkType link_type_from_string(std::string_view text) {
  if (text == "intra-edge") return LinkType::IntraEdge;
  if (text == "inter-edge") return LinkType::InterEdge;
  if (text == "cross-domain") return LinkType::CrossDomain;
  throw CaminoError(Errc::SchemaError, "unknown link type '" + std::string(text) + "'");
}

const char* to_string(LinkType type) {
  switch (type) {
    case LinkType::IntraEdge: return "intra-edge";
    case LinkType::InterEdge: return "inter-edge";
    case LinkType::CrossDomain: return "cross-domain";
  }
  return "intra-edge";
}

const NetworkService* NetworkIntent::service(std::string_view name) const {
  for (const NetworkService& s : services) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

NetworkIntent parse_network_intent(std::string_view json_text) {
  const json doc = parse_json(json_text);
  check_keys(doc, "network intent", {"deployment_id", "services"});

  NetworkIntent net;
  net.deployment_id = get_nonempty_string(doc, "deployment_id", "network intent");
  const auto& services = doc.at("services");
  if (!services.is_array()) {
    throw CaminoError(Errc::SchemaError, "network intent: 'services' must be an array");
  }
  for (const auto& entry : services) {
    check_keys(entry, "network service", {"name", "endpoints", "links_to"});
    NetworkService svc;
    svc.name = get_nonempty_string(entry, "name", "network service");
    const auto& endpoints = entry.at("endpoints");
    if (!endpoints.is_array()) {
      throw CaminoError(Errc::SchemaError, "network service: 'endpoints' must be an array");
    }
    for (const auto& ep_entry : endpoints) {
      check_keys(ep_entry, "endpoint", {"host", "port", "protocol"});
      Endpoint ep;
      ep.host = get_nonempty_string(ep_entry, "host", "endpoint");
      if (!ep_entry.at("port").is_number_integer()) {
        throw CaminoError(Errc::SchemaError, "endpoint: 'port' must be an integer");
      }
      const auto port = ep_entry.at("port").get<std::int64_t>();
      if (port < 1 || port > 65535) {
        throw CaminoError(Errc::SchemaError, "endpoint: port out of range");
      }
      ep.port = static_cast<int>(port);
      ep.protocol = protocol_from_string(get_nonempty_string(ep_entry, "protocol", "endpoint"));
      svc.endpoints.push_back(std::move(ep));
    }
    const auto& links = entry.at("links_to");
    if (!links.is_array()) {
      throw CaminoError(Errc::SchemaError, "network service: 'links_to' must be an array");
    }
    for (const auto& link_entry : links) {
      check_keys(link_entry, "link", {"name", "type"}, {"resolution"});
      Link link;
      link.name = get_nonempty_string(link_entry, "name", "link");
      link.type = link_type_from_string(get_nonempty_string(link_entry, "type", "link"));
      if (link_entry.contains("resolution")) {
        const auto& res = link_entry.at("resolution");
        check_keys(res, "resolution", {"domain", "fqdn"});
        link.resolution = Resolution{get_nonempty_string(res, "domain", "resolution"),
                                     get_nonempty_string(res, "fqdn", "resolution")};
      }
      const bool cross = link.type == LinkType::CrossDomain;
      if (cross != link.resolution.has_value()) {
        throw CaminoError(Errc::SemanticError,
                          "link " + svc.name + "->" + link.name +
                              ": resolution present iff type is cross-domain");
      }
      svc.links_to.push_back(std::move(link));
    }
    net.services.push_back(std::move(svc));
  }

  // Link targets resolve; non-cross-domain links are symmetric.
  for (const NetworkService& svc : net.services) {
    for (const Link& link : svc.links_to) {
      if (link.type == LinkType::CrossDomain) continue;
      const NetworkService* peer = net.service(link.name);
      if (peer == nullptr) {
        throw CaminoError(Errc::SemanticError,
                          "link " + svc.name + "->" + link.name + " names an unknown service");
      }
      const bool mirrored = std::any_of(
          peer->links_to.begin(), peer->links_to.end(),
          [&](const Link& back) { return back.name == svc.name && back.type == link.type; });
      if (!mirrored) {
        throw CaminoError(Errc::SemanticError,
                          "link " + svc.name + "->" + link.name + " is not symmetric");
      }
    }
  }
  return net;
}

std::string to_json_text(const NetworkIntent& net) {
  ordered_json doc;
  doc["deployment_id"] = net.deployment_id;
  doc["services"] = ordered_json::array();
  for (const NetworkService& svc : net.services) {
    ordered_json s;
    s["name"] = svc.name;
    s["endpoints"] = ordered_json::array();
    for (const Endpoint& ep : svc.endpoints) {
      s["endpoints"].push_back({{"host", ep.host}, {"port", ep.port}, {"protocol", to_string(ep.protocol)}});
    }
    s["links_to"] = ordered_json::array();
    for (const Link& link : svc.links_to) {
      ordered_json l;
      l["name"] = link.name;
      l["type"] = to_string(link.type);
      if (link.resolution) {
        l["resolution"] = {{"domain", link.resolution->domain}, {"fqdn", link.resolution->fqdn}};
      }
      s["links_to"].push_back(std::move(l));
    }
    doc["services"].push_back(std::move(s));
  }
  return doc.dump(2);
}

bool structurally_equal(const NetworkIntent& a, const NetworkIntent& b) {
  if (a.deployment_id != b.deployment_id) return false;
  auto normalize = [](const NetworkIntent& net) {
    NetworkIntent out = net;
    std::sort(out.services.begin(), out.services.end(),
              [](const NetworkService& x, const NetworkService& y) { return x.name < y.name; });
    for (NetworkService& svc : out.services) {
      std::sort(svc.endpoints.begin(), svc.endpoints.end(), [](const Endpoint& x, const Endpoint& y) {
        return std::tie(x.host, x.port, x.protocol) < std::tie(y.host, y.port, y.protocol);
      });
      std::sort(svc.links_to.begin(), svc.links_to.end(), [](const Link& x, const Link& y) {
        const std::string xd = x.resolution ? x.resolution->domain : "";
        const std::string yd = y.resolution ? y.resolution->domain : "";
        return std::tie(x.name, x.type, xd) < std::tie(y.name, y.type, yd);
      });
    }
    return out;
  };
  return normalize(a) == normalize(b);
}

NetworkIntent derive_network_intent(const DeploymentIntent& intent, const PlacementMap& placement,
                                    const EndpointCatalog& catalog) {
  for (const ServiceSpec& spec : intent.services) {
    if (placement.find(spec.package_name) == placement.end()) {
      throw CaminoError(Errc::UnplacedService, spec.package_name + " has no edge assignment");
    }
  }

  struct LinkKey {
    std::string name;
    LinkType type;
    std::string domain;
    bool operator<(const LinkKey& other) const {
      return std::tie(name, type, domain) < std::tie(other.name, other.type, other.domain);
    }
  };
  std::map<std::string, std::map<LinkKey, Link>> links;
  for (const ServiceSpec& spec : intent.services) links[spec.package_name];

  for (const ServiceSpec& spec : intent.services) {
    for (const Dependency& dep : spec.dependencies) {
      if (dep.domain == intent.domain_name) {
        const std::string& self_edge = placement.at(spec.package_name);
        const std::string& peer_edge = placement.at(dep.after);
        const LinkType type =
            self_edge == peer_edge ? LinkType::IntraEdge : LinkType::InterEdge;
        links[spec.package_name].insert({{dep.after, type, ""}, Link{dep.after, type, std::nullopt}});
        links[dep.after].insert(
            {{spec.package_name, type, ""}, Link{spec.package_name, type, std::nullopt}});
      } else {
        Link link{dep.after, LinkType::CrossDomain, Resolution{dep.domain, dep.fqdn}};
        links[spec.package_name].insert({{dep.after, LinkType::CrossDomain, dep.domain}, std::move(link)});
      }
    }
  }

  NetworkIntent net;
  net.deployment_id = intent.deployment_id;
  std::vector<std::string> names;
  names.reserve(intent.services.size());
  for (const ServiceSpec& spec : intent.services) names.push_back(spec.package_name);
  std::sort(names.begin(), names.end());

  for (const std::string& name : names) {
    NetworkService svc;
    svc.name = name;
    const auto it = catalog.endpoints.find(name);
    if (it == catalog.endpoints.end() || it->second.empty()) {
      throw CaminoError(Errc::MissingEndpointMetadata, "no endpoint metadata for " + name);
    }
    svc.endpoints = it->second;
    for (const auto& [key, link] : links.at(name)) {
      (void)key;
      svc.links_to.push_back(link);
    }
    net.services.push_back(std::move(svc));
  }
  return net;
}

std::string deployment_namespace(const std::string& deployment_id) {
  return "ns-" + deployment_id;
}

}  // namespace camino::intent
