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

#include <doctest.h>

#include "camino/errors.hpp"
#include "camino/mesh.hpp"
#include "helpers.hpp"

using namespace camino;
using test::read_fixture;
using test::TempDir;

namespace {

intent::NetworkIntent listing3() {
  return intent::parse_network_intent(read_fixture("intents/listing3.json"));
}

intent::PlacementMap fig3_placement() {
  return {{"CNF-1", "Edge1"}, {"CNF-2", "Edge1"}, {"CNF-4", "Edge2"}};
}

}  // namespace

TEST_CASE("domain resolution: hint wins, table is the fallback") {
  mesh::TrustedDomainTable table;
  CHECK(mesh::resolve_domain("Domain-Y", table, std::string("yyy.yyy.yyy.yyy")) ==
        "yyy.yyy.yyy.yyy");
  table["Domain-Y"] = "y.example";
  CHECK(mesh::resolve_domain("Domain-Y", table, std::nullopt) == "y.example");
  try {
    mesh::resolve_domain("Domain-Z", {}, std::nullopt);
    FAIL("expected UnresolvableDomain");
  } catch (const CaminoError& error) {
    CHECK(error.code() == Errc::UnresolvableDomain);
  }
}

TEST_CASE("the example deployment plans to the expected mesh objects") {
  const auto configs = mesh::plan_mesh(listing3(), fig3_placement(), {});
  REQUIRE(configs.count("Edge1") == 1);
  REQUIRE(configs.count("Edge2") == 1);

  const mesh::MeshConfig& edge1 = configs.at("Edge1");
  REQUIRE(edge1.routes.size() == 2);
  CHECK(edge1.routes[0] == mesh::Route{"CNF-1", "CNF-2", "round-robin"});
  CHECK(edge1.routes[1] == mesh::Route{"CNF-2", "CNF-4", "round-robin"});
  REQUIRE(edge1.remote_entries.size() == 2);
  const auto& cnf3 = edge1.remote_entries[0];
  CHECK(cnf3.service == "CNF-3");
  CHECK(cnf3.remote == "Domain-Y");
  CHECK(cnf3.address == "yyy.yyy.yyy.yyy");  // intent-embedded hint wins
  CHECK(cnf3.cross_domain);
  const auto& cnf4 = edge1.remote_entries[1];
  CHECK(cnf4.service == "CNF-4");
  CHECK(cnf4.remote == "Edge2");
  CHECK(cnf4.address == "svc4.ns-338d10a2-2669-46e1.svc.edge2.local");
  CHECK(cnf4.port == 80);
  REQUIRE(edge1.gateway.has_value());
  REQUIRE(edge1.gateway->exposed.size() == 1);
  CHECK(edge1.gateway->exposed[0].service == "CNF-2");
  CHECK(edge1.gateway->exposed[0].port == 15443);

  const mesh::MeshConfig& edge2 = configs.at("Edge2");
  REQUIRE(edge2.routes.size() == 1);
  CHECK(edge2.routes[0] == mesh::Route{"CNF-4", "CNF-2", "round-robin"});
  REQUIRE(edge2.remote_entries.size() == 1);
  CHECK(edge2.remote_entries[0].service == "CNF-2");
  CHECK(edge2.remote_entries[0].remote == "Edge1");
  CHECK_FALSE(edge2.gateway.has_value());
}

TEST_CASE("a single-edge pair needs one route and nothing else") {
  intent::NetworkIntent net;
  net.deployment_id = "d1";
  net.services = {
      {"A", {{"a", 80, intent::Protocol::Http}}, {{"B", intent::LinkType::IntraEdge, {}}}},
      {"B", {{"b", 80, intent::Protocol::Http}}, {{"A", intent::LinkType::IntraEdge, {}}}}};
  const auto configs = mesh::plan_mesh(net, {{"A", "Edge1"}, {"B", "Edge1"}}, {});
  REQUIRE(configs.size() == 1);
  const auto& config = configs.at("Edge1");
  REQUIRE(config.routes.size() == 1);
  CHECK(config.routes[0] == mesh::Route{"A", "B", "round-robin"});
  CHECK(config.remote_entries.empty());
  CHECK_FALSE(config.gateway.has_value());
}

TEST_CASE("unresolvable domains abort planning") {
  intent::NetworkIntent net;
  net.deployment_id = "d1";
  net.services = {{"A",
                   {{"a", 80, intent::Protocol::Http}},
                   {{"X", intent::LinkType::CrossDomain, intent::Resolution{"Domain-Z", ""}}}}};
  try {
    mesh::plan_mesh(net, {{"A", "Edge1"}}, {});
    FAIL("expected UnresolvableDomain");
  } catch (const CaminoError& error) {
    CHECK(error.code() == Errc::UnresolvableDomain);
  }
  // With a table entry the plan succeeds.
  const auto configs = mesh::plan_mesh(net, {{"A", "Edge1"}}, {{"Domain-Z", "z.example"}});
  CHECK(configs.at("Edge1").remote_entries[0].address == "z.example");
}

TEST_CASE("proxy injection follows link degree") {
  auto net = listing3();
  net.services.push_back({"LONER", {{"l", 80, intent::Protocol::Http}}, {}});
  const auto injections = mesh::proxy_injections(net);
  REQUIRE(injections.size() == 4);
  for (const auto& injection : injections) {
    CHECK(injection.enabled == (injection.service != "LONER"));
  }
}

TEST_CASE("reachability walks every planned link class") {
  const auto net = listing3();
  const auto placement = fig3_placement();
  auto configs = mesh::plan_mesh(net, placement, {});
  CHECK(mesh::check_reachability(configs, net, placement).empty());

  SUBCASE("deleting a remote entry breaks exactly its link") {
    auto tampered = configs;
    auto& entries = tampered.at("Edge2").remote_entries;
    entries.clear();  // drop RemoteEntry(CNF-2)
    const auto findings = mesh::check_reachability(tampered, net, placement);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].from == "CNF-4");
    CHECK(findings[0].to == "CNF-2");
  }

  SUBCASE("deleting the gateway breaks the cross-domain link") {
    auto tampered = configs;
    tampered.at("Edge1").gateway.reset();
    const auto findings = mesh::check_reachability(tampered, net, placement);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].from == "CNF-2");
    CHECK(findings[0].to == "CNF-3");
    CHECK(findings[0].reason == "missing gateway exposure");
  }

  SUBCASE("empty intent is trivially reachable") {
    const intent::NetworkIntent empty{"d", {}};
    CHECK(mesh::check_reachability({}, empty, {}).empty());
  }
}

TEST_CASE("network packages hydrate one per edge with mesh objects") {
  TempDir dir("mesh");
  store::PackageStore store(dir.path());
  store.register_repository("blueprints", store::RepoKind::Blueprint);
  store.register_repository("edge1-deploy", store::RepoKind::Deployment, "Edge1");
  store.register_repository("edge2-deploy", store::RepoKind::Deployment, "Edge2");
  for (const char* name : {"mesh-route", "mesh-remote-entry", "mesh-gateway"}) {
    store.create_revision("blueprints", name, "v1",
                          {manifest::parse(read_fixture(std::string("blueprints/") + name +
                                                        "/v1/" +
                                                        (std::string(name) == "mesh-route"
                                                             ? "route.cmf"
                                                             : std::string(name) == "mesh-gateway"
                                                                   ? "gateway.cmf"
                                                                   : "remote-entry.cmf")))});
    store.publish("blueprints", name, "v1");
  }

  const auto net = listing3();
  const auto placement = fig3_placement();
  const auto configs = mesh::plan_mesh(net, placement, {});

  mesh::NetworkPackageSpec spec;
  spec.deployment_id = net.deployment_id;
  spec.ns = intent::deployment_namespace(net.deployment_id);
  spec.blueprint_repo = "blueprints";
  spec.target_repos = {{"Edge1", "edge1-deploy"}, {"Edge2", "edge2-deploy"}};

  const auto packages = mesh::hydrate_network_packages(configs, store, spec);
  REQUIRE(packages.size() == 2);
  // Edge1: 2 routes + 2 remote entries + 1 gateway port = 5 manifests.
  CHECK(packages[0].manifests.size() == 5);
  CHECK(packages[0].setters.empty());
  // Edge2: 1 route + 1 remote entry.
  CHECK(packages[1].manifests.size() == 2);
  CHECK(packages[1].state == store::RevisionState::Draft);

  SUBCASE("empty configs hydrate nothing") {
    CHECK(mesh::hydrate_network_packages({}, store, spec).empty());
  }

  SUBCASE("a missing gateway blueprint surfaces before admission") {
    store.delete_revision("blueprints", "mesh-gateway", "v1");
    try {
      mesh::hydrate_network_packages(configs, store, spec);
      FAIL("expected UnknownRevision");
    } catch (const CaminoError& error) {
      CHECK(error.code() == Errc::UnknownRevision);
    }
  }
}

TEST_CASE("property: every link maps to exactly one planning pattern") {
  SplitMix64 rng(20260810);
  for (int trial = 0; trial < 150; ++trial) {
    const auto generated = test::random_intent(rng, "mesh-" + std::to_string(trial));
    const auto placement = test::random_placement(rng, generated, 3);
    const auto catalog = test::catalog_for(generated);
    const auto net = intent::derive_network_intent(generated, placement, catalog);
    const auto configs =
        mesh::plan_mesh(net, placement, {{"Domain-Y", "y.example"}}, {});

    for (const auto& service : net.services) {
      const std::string& edge = placement.at(service.name);
      for (const auto& link : service.links_to) {
        const auto it = configs.find(edge);
        REQUIRE(it != configs.end());
        const mesh::MeshConfig& config = it->second;
        const bool has_route = std::any_of(
            config.routes.begin(), config.routes.end(), [&](const mesh::Route& route) {
              return (route.from == service.name && route.to == link.name) ||
                     (route.from == link.name && route.to == service.name);
            });
        const bool has_entry = std::any_of(
            config.remote_entries.begin(), config.remote_entries.end(),
            [&](const mesh::RemoteEntry& entry) { return entry.service == link.name; });
        const bool gateway_covers =
            config.gateway.has_value() &&
            std::any_of(config.gateway->exposed.begin(), config.gateway->exposed.end(),
                        [&](const mesh::GatewayPort& port) { return port.service == service.name; });
        switch (link.type) {
          case intent::LinkType::IntraEdge:
            REQUIRE(has_route);
            break;
          case intent::LinkType::InterEdge:
            REQUIRE(has_route);
            REQUIRE(has_entry);
            break;
          case intent::LinkType::CrossDomain:
            REQUIRE(has_entry);
            REQUIRE(gateway_covers);
            break;
        }
      }
    }

    // Namespace sameness: every remote entry carries the deployment namespace.
    const std::string ns = intent::deployment_namespace(net.deployment_id);
    for (const auto& [edge, config] : configs) {
      (void)edge;
      for (const auto& entry : config.remote_entries) CHECK(entry.ns == ns);
    }

    CHECK(mesh::check_reachability(configs, net, placement).empty());
  }
}

TEST_CASE("planning is isomorphic under edge renaming") {
  const auto net = listing3();
  const auto placement = fig3_placement();
  const auto original = mesh::plan_mesh(net, placement, {});

  intent::PlacementMap renamed;
  for (const auto& [service, edge] : placement) {
    renamed[service] = edge == "Edge1" ? "EdgeB" : "EdgeA";
  }
  const auto swapped = mesh::plan_mesh(net, renamed, {});
  REQUIRE(swapped.count("EdgeB") == 1);
  const auto& edge_b = swapped.at("EdgeB");
  const auto& edge_1 = original.at("Edge1");
  CHECK(edge_b.routes == edge_1.routes);
  CHECK(edge_b.remote_entries.size() == edge_1.remote_entries.size());
  CHECK(edge_b.gateway.has_value() == edge_1.gateway.has_value());
  // Remote addresses follow the peer edge name; everything else is identical.
  CHECK(swapped.at("EdgeA").routes == original.at("Edge2").routes);
}

TEST_CASE("mesh config JSON is deterministic") {
  const auto configs = mesh::plan_mesh(listing3(), fig3_placement(), {});
  const std::string a = mesh::to_json_text(configs.at("Edge1"));
  const std::string b = mesh::to_json_text(configs.at("Edge1"));
  CHECK(a == b);
  CHECK(a.find("\"gateway\"") != std::string::npos);
}
