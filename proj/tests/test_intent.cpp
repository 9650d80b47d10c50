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

#include <functional>

#include "camino/errors.hpp"
#include "camino/intent.hpp"
#include "helpers.hpp"

using namespace camino;
using test::fixtures_dir;
using test::read_fixture;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const CaminoError& error) {
    return error.code();
  }
  FAIL("expected a CaminoError");
  return Errc::EngineError;
}

}  // namespace

TEST_CASE("the example deployment intent parses field-for-field") {
  const auto intent = intent::parse_deployment_intent(read_fixture("intents/listing1.json"));
  CHECK(intent.domain_name == "Domain-X");
  CHECK(intent.deployment_id == "338d10a2-2669-46e1");
  CHECK(intent.timestamp == "2025-01-24T20:55:50.991211");
  REQUIRE(intent.services.size() == 3);
  CHECK(intent.services[0].package_name == "CNF-1");
  CHECK(intent.services[0].version == "v1");
  CHECK(intent.services[0].dependencies.empty());
  const auto& cnf2 = intent.services[1];
  CHECK(cnf2.package_name == "CNF-2");
  CHECK(cnf2.version == "v3");
  REQUIRE(cnf2.dependencies.size() == 2);
  CHECK(cnf2.dependencies[0].after == "CNF-3");
  CHECK(cnf2.dependencies[0].domain == "Domain-Y");
  CHECK(cnf2.dependencies[0].fqdn == "yyy.yyy.yyy.yyy");
  CHECK(cnf2.dependencies[1].after == "CNF-1");
  CHECK(cnf2.dependencies[1].domain == "Domain-X");
  CHECK(intent.services[2].dependencies.size() == 1);
}

TEST_CASE("single service without a dependencies field gets an empty list") {
  const auto intent = intent::parse_deployment_intent(R"({
    "domain_name": "Domain-X", "deployment_id": "d1",
    "timestamp": "2026-01-01T00:00:00",
    "services": [{"package_name": "CNF-A", "version": "v1"}]})");
  REQUIRE(intent.services.size() == 1);
  CHECK(intent.services[0].dependencies.empty());
  CHECK(intent.services[0].qos_level == "default");
}

TEST_CASE("self-dependency is a SemanticError") {
  const std::string text = R"({
    "domain_name": "Domain-X", "deployment_id": "d1",
    "timestamp": "2026-01-01T00:00:00",
    "services": [{"package_name": "CNF-A", "version": "v1",
                  "dependencies": [{"after": "CNF-A", "domain": "Domain-X"}]}]})";
  CHECK(code_of([&] { intent::parse_deployment_intent(text); }) == Errc::SemanticError);
}

TEST_CASE("schema violations") {
  CHECK(code_of([] { intent::parse_deployment_intent("{not json"); }) == Errc::SyntaxError);
  // Unknown field.
  CHECK(code_of([] {
          intent::parse_deployment_intent(R"({
            "domain_name": "X", "deployment_id": "d", "timestamp": "2026-01-01T00:00:00",
            "services": [{"package_name": "A", "version": "v1"}], "extra": 1})");
        }) == Errc::SchemaError);
  // Missing field.
  CHECK(code_of([] {
          intent::parse_deployment_intent(R"({
            "domain_name": "X", "deployment_id": "d",
            "services": [{"package_name": "A", "version": "v1"}]})");
        }) == Errc::SchemaError);
  // Bad version label.
  CHECK(code_of([] {
          intent::parse_deployment_intent(R"({
            "domain_name": "X", "deployment_id": "d", "timestamp": "2026-01-01T00:00:00",
            "services": [{"package_name": "A", "version": "1.0"}]})");
        }) == Errc::SchemaError);
  // Empty services.
  CHECK(code_of([] {
          intent::parse_deployment_intent(R"({
            "domain_name": "X", "deployment_id": "d", "timestamp": "2026-01-01T00:00:00",
            "services": []})");
        }) == Errc::SchemaError);
}

TEST_CASE("semantic violations") {
  // Duplicate package names.
  CHECK(code_of([] {
          intent::parse_deployment_intent(R"({
            "domain_name": "X", "deployment_id": "d", "timestamp": "2026-01-01T00:00:00",
            "services": [{"package_name": "A", "version": "v1"},
                         {"package_name": "A", "version": "v2"}]})");
        }) == Errc::SemanticError);
  // Dangling local "after".
  CHECK(code_of([] {
          intent::parse_deployment_intent(R"({
            "domain_name": "X", "deployment_id": "d", "timestamp": "2026-01-01T00:00:00",
            "services": [{"package_name": "A", "version": "v1",
                          "dependencies": [{"after": "B", "domain": "X"}]}]})");
        }) == Errc::SemanticError);
  // External dependency without an fqdn.
  CHECK(code_of([] {
          intent::parse_deployment_intent(R"({
            "domain_name": "X", "deployment_id": "d", "timestamp": "2026-01-01T00:00:00",
            "services": [{"package_name": "A", "version": "v1",
                          "dependencies": [{"after": "B", "domain": "Y"}]}]})");
        }) == Errc::SemanticError);
}

TEST_CASE("parse/serialize identity on the deployment intent") {
  const std::string original = read_fixture("intents/listing1.json");
  const auto intent = intent::parse_deployment_intent(original);
  const auto round = intent::parse_deployment_intent(intent::to_json_text(intent));
  CHECK(round == intent);

  SplitMix64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto generated = test::random_intent(rng, "gen-" + std::to_string(trial));
    const auto reparsed = intent::parse_deployment_intent(intent::to_json_text(generated));
    REQUIRE(reparsed == generated);
  }
}

TEST_CASE("termination intents parse strictly") {
  const auto termination = intent::parse_termination_intent(
      R"({"deployment_id": "338d10a2-2669-46e1", "domain_name": "Domain-X"})");
  CHECK(termination.deployment_id == "338d10a2-2669-46e1");
  CHECK(termination.domain_name == "Domain-X");
  CHECK(code_of([] {
          intent::parse_termination_intent(R"({"deployment_id": "x"})");
        }) == Errc::SchemaError);
  CHECK(code_of([] {
          intent::parse_termination_intent(
              R"({"deployment_id": "x", "domain_name": "D", "extra": 1})");
        }) == Errc::SchemaError);
}

TEST_CASE("the example package descriptor parses with normalized quantities") {
  const auto descriptor = intent::parse_package_descriptor(read_fixture("intents/listing2.json"));
  CHECK(descriptor.name == "example_package");
  REQUIRE(descriptor.requirements.size() == 1);
  const auto& req = descriptor.requirements[0];
  CHECK(req.qos == "default");
  CHECK(req.revision == "v5");
  CHECK(req.resources.container == "example_container");
  CHECK(std::get<std::int64_t>(req.resources.cpu_raw) == 8);
  CHECK(req.resources.cpu_millicores == 8000);
  CHECK(std::get<std::string>(req.resources.memory_raw) == "1000000Ki");
  CHECK(req.resources.memory_bytes == 1024000000);
}

TEST_CASE("descriptor quantity and schema errors") {
  CHECK(code_of([] {
          intent::parse_package_descriptor(R"({
            "name": "p", "package_requirements": [{"qos": "default", "revision": "v1",
              "package_resources": {"container": "c", "cpu": 1, "memory": "2.5Gi"}}]})");
        }) == Errc::QuantityError);
  CHECK(code_of([] {
          intent::parse_package_descriptor(R"({
            "name": "p", "package_requirements": [{"qos": "default", "revision": "v1",
              "package_resources": {"container": "c", "cpu": 0, "memory": "1Gi"}}]})");
        }) == Errc::QuantityError);
  CHECK(code_of([] {
          intent::parse_package_descriptor(R"({"name": "p", "package_requirements": []})");
        }) == Errc::SchemaError);
}

namespace {

intent::PlacementMap listing1_placement(const std::string& cnf1, const std::string& cnf2,
                                        const std::string& cnf4) {
  return {{"CNF-1", cnf1}, {"CNF-2", cnf2}, {"CNF-4", cnf4}};
}

intent::EndpointCatalog listing_catalog() {
  intent::EndpointCatalog catalog;
  catalog.endpoints["CNF-1"] = {{"svc1", 80, intent::Protocol::Http}};
  catalog.endpoints["CNF-2"] = {{"svc2", 80, intent::Protocol::Http}};
  catalog.endpoints["CNF-4"] = {{"svc4", 80, intent::Protocol::Http}};
  return catalog;
}

}  // namespace

TEST_CASE("the derived network intent matches the example network deployment intent") {
  const auto intent = intent::parse_deployment_intent(read_fixture("intents/listing1.json"));
  const auto derived = intent::derive_network_intent(
      intent, listing1_placement("Edge1", "Edge1", "Edge2"), listing_catalog());
  const auto expected = intent::parse_network_intent(read_fixture("intents/listing3.json"));
  CHECK(intent::structurally_equal(derived, expected));
}

TEST_CASE("a single service yields one entry with no links") {
  const auto intent = test::make_intent("d1", {test::make_service("CNF-A")});
  intent::EndpointCatalog catalog;
  catalog.endpoints["CNF-A"] = {{"a", 80, intent::Protocol::Http}};
  const auto net = intent::derive_network_intent(intent, {{"CNF-A", "Edge1"}}, catalog);
  REQUIRE(net.services.size() == 1);
  CHECK(net.services[0].links_to.empty());
}

TEST_CASE("link types follow the placement") {
  // CNF-1 and CNF-2 split; CNF-2 and CNF-4 co-located.
  const auto intent = intent::parse_deployment_intent(read_fixture("intents/listing1.json"));
  const auto net = intent::derive_network_intent(
      intent, listing1_placement("Edge1", "Edge2", "Edge2"), listing_catalog());
  const auto* cnf2 = net.service("CNF-2");
  REQUIRE(cnf2 != nullptr);
  for (const auto& link : cnf2->links_to) {
    if (link.name == "CNF-1") CHECK(link.type == intent::LinkType::InterEdge);
    if (link.name == "CNF-4") CHECK(link.type == intent::LinkType::IntraEdge);
    if (link.name == "CNF-3") CHECK(link.type == intent::LinkType::CrossDomain);
  }
  const auto* cnf1 = net.service("CNF-1");
  REQUIRE(cnf1->links_to.size() == 1);
  CHECK(cnf1->links_to[0].type == intent::LinkType::InterEdge);
}

TEST_CASE("derivation errors") {
  const auto intent = intent::parse_deployment_intent(read_fixture("intents/listing1.json"));
  CHECK(code_of([&] {
          intent::derive_network_intent(intent, {{"CNF-1", "Edge1"}}, listing_catalog());
        }) == Errc::UnplacedService);
  intent::EndpointCatalog missing = listing_catalog();
  missing.endpoints.erase("CNF-2");
  CHECK(code_of([&] {
          intent::derive_network_intent(intent, listing1_placement("Edge1", "Edge1", "Edge2"),
                                        missing);
        }) == Errc::MissingEndpointMetadata);
}

TEST_CASE("network intent symmetry is validated on parse") {
  const std::string asymmetric = R"({
    "deployment_id": "d",
    "services": [
      {"name": "A", "endpoints": [{"host": "a", "port": 80, "protocol": "HTTP"}],
       "links_to": [{"name": "B", "type": "intra-edge"}]},
      {"name": "B", "endpoints": [{"host": "b", "port": 80, "protocol": "HTTP"}],
       "links_to": []}
    ]})";
  CHECK(code_of([&] { intent::parse_network_intent(asymmetric); }) == Errc::SemanticError);

  const std::string bad_resolution = R"({
    "deployment_id": "d",
    "services": [
      {"name": "A", "endpoints": [{"host": "a", "port": 80, "protocol": "HTTP"}],
       "links_to": [{"name": "B", "type": "intra-edge",
                     "resolution": {"domain": "Y", "fqdn": "y"}}]}
    ]})";
  CHECK(code_of([&] { intent::parse_network_intent(bad_resolution); }) == Errc::SemanticError);
}

TEST_CASE("property: derived network intents are symmetric and placement-order independent") {
  SplitMix64 rng(20260810);
  for (int trial = 0; trial < 150; ++trial) {
    auto generated = test::random_intent(rng, "prop-" + std::to_string(trial));
    const auto placement = test::random_placement(rng, generated, 3);
    const auto catalog = test::catalog_for(generated);
    const auto net = intent::derive_network_intent(generated, placement, catalog);

    // Symmetry invariant, via the strict parser.
    CHECK_NOTHROW(intent::parse_network_intent(intent::to_json_text(net)));

    // Permuting the service list never changes the derived link set.
    std::reverse(generated.services.begin(), generated.services.end());
    const auto permuted = intent::derive_network_intent(generated, placement, catalog);
    CHECK(intent::structurally_equal(net, permuted));
  }
}
