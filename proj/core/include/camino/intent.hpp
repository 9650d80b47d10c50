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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace camino::intent {

// ---------------------------------------------------------------------------
// Deployment intent
// ---------------------------------------------------------------------------

struct Dependency {
  std::string after;   // package_name of the predecessor
  std::string domain;  // administrative domain owning the predecessor
  std::string fqdn;    // required when domain differs from the intent's domain;
                       // carried opaquely (never dereferenced) otherwise

  bool operator==(const Dependency&) const = default;
};

struct ServiceSpec {
  std::string package_name;
  std::string version;             // "v<n>" blueprint revision label
  std::string qos_level{"default"};
  std::vector<Dependency> dependencies;

  bool operator==(const ServiceSpec&) const = default;
};

struct DeploymentIntent {
  std::string domain_name;
  std::string deployment_id;
  std::string timestamp;  // ISO-8601 instant, informational only
  std::vector<ServiceSpec> services;

  const ServiceSpec* service(std::string_view package_name) const;

  bool operator==(const DeploymentIntent&) const = default;
};

// Strict parse: unknown fields are rejected, all invariants checked.
// Throws SyntaxError / SchemaError / SemanticError.
DeploymentIntent parse_deployment_intent(std::string_view json_text);
std::string to_json_text(const DeploymentIntent& intent);

struct TerminationIntent {
  std::string deployment_id;
  std::string domain_name;
};

TerminationIntent parse_termination_intent(std::string_view json_text);

// ---------------------------------------------------------------------------
// Package descriptor (IESD payload)
// ---------------------------------------------------------------------------

// Original scalar as written, kept for hydration; cpu may be an integer
// (cores) or a "<n>m" string, memory an integer (bytes) or "<n>Ki/Mi/Gi".
using RawScalar = std::variant<std::int64_t, std::string>;

struct PackageResources {
  std::string container;
  RawScalar cpu_raw;
  std::int64_t cpu_millicores{0};
  RawScalar memory_raw;
  std::int64_t memory_bytes{0};

  bool operator==(const PackageResources&) const = default;
};

struct PackageRequirement {
  std::string qos;
  std::string revision;
  PackageResources resources;

  bool operator==(const PackageRequirement&) const = default;
};

struct PackageDescriptor {
  std::string name;
  std::vector<PackageRequirement> requirements;

  // Entry matching both labels; nullptr when absent.
  const PackageRequirement* requirement_for(std::string_view qos, std::string_view revision) const;

  bool operator==(const PackageDescriptor&) const = default;
};

// Throws SyntaxError / SchemaError / QuantityError.
PackageDescriptor parse_package_descriptor(std::string_view json_text);
std::string to_json_text(const PackageDescriptor& descriptor);

// ---------------------------------------------------------------------------
// Network intent
// ---------------------------------------------------------------------------

enum class Protocol { Http, Tcp, Udp, Grpc };

Protocol protocol_from_string(std::string_view text);
const char* to_string(Protocol protocol);

enum class LinkType { IntraEdge, InterEdge, CrossDomain };

LinkType link_type_from_string(std::string_view text);
const char* to_string(LinkType type);

struct Endpoint {
  std::string host;
  int port{0};
  Protocol protocol{Protocol::Http};

  bool operator==(const Endpoint&) const = default;
};

struct Resolution {
  std::string domain;
  std::string fqdn;

  bool operator==(const Resolution&) const = default;
};

struct Link {
  std::string name;
  LinkType type{LinkType::IntraEdge};
  std::optional<Resolution> resolution;  // present iff type == CrossDomain

  bool operator==(const Link&) const = default;
};

struct NetworkService {
  std::string name;
  std::vector<Endpoint> endpoints;
  std::vector<Link> links_to;

  bool operator==(const NetworkService&) const = default;
};

struct NetworkIntent {
  std::string deployment_id;
  std::vector<NetworkService> services;

  const NetworkService* service(std::string_view name) const;

  bool operator==(const NetworkIntent&) const = default;
};

NetworkIntent parse_network_intent(std::string_view json_text);
std::string to_json_text(const NetworkIntent& net);

// Order-insensitive comparison: same service set, endpoint sets, link sets.
bool structurally_equal(const NetworkIntent& a, const NetworkIntent& b);

// ---------------------------------------------------------------------------
// Derivation
// ---------------------------------------------------------------------------

// service name -> edge cluster id, local services only
using PlacementMap = std::map<std::string, std::string>;

// Blueprint-side endpoint metadata per package.
struct EndpointCatalog {
  std::map<std::string, std::vector<Endpoint>> endpoints;
};

// Derives the network intent from the deployment intent plus placement.
// Each dependency contributes one link on each local endpoint of the pair;
// the type is intra-edge when both sides share an edge, inter-edge across
// local edges, cross-domain for external dependencies (local side only,
// carrying the resolution). Services and links are sorted by name.
// Throws UnplacedService / MissingEndpointMetadata.
NetworkIntent derive_network_intent(const DeploymentIntent& intent, const PlacementMap& placement,
                                    const EndpointCatalog& catalog);

// Namespace convention: one namespace per deployment, identical on every
// edge (namespace sameness).
std::string deployment_namespace(const std::string& deployment_id);

}  // namespace camino::intent
