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

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "camino/engine.hpp"
#include "camino/errors.hpp"
#include "camino/server.hpp"
#include "cli_app.hpp"
#include "helpers.hpp"

using namespace camino;
using nlohmann::json;
using test::fixtures_dir;
using test::read_fixture;
using test::TempDir;

namespace {

engine::EngineConfig fixtures_config(const std::filesystem::path& state_dir) {
  engine::EngineConfig config;
  config.topology = edgesim::TopologyConfig::load(fixtures_dir() / "topology.json");
  config.blueprint_fixtures = fixtures_dir() / "blueprints";
  config.iesd_dir = fixtures_dir() / "iesd";
  config.trusted_domains = {{"Domain-Y", "domain-y.example.net"}};
  config.store_root = state_dir / "store";
  config.registry_path = state_dir / "registry.json";
  config.tokens = {{"admin-token", engine::Role::Admin}, {"viewer", engine::Role::External}};
  config.auto_tick_ms = 0;
  return config;
}

void advance_until(engine::Engine& engine, const std::string& id, registry::Phase phase,
                   int max_ticks = 60) {
  for (int i = 0; i < max_ticks; ++i) {
    if (engine.status(id).phase == phase) return;
    engine.advance(1);
  }
  REQUIRE(engine.status(id).phase == phase);
}

// Listening TCP sockets owned by this process, via /proc.
int listening_sockets_of_self() {
  std::set<std::string> socket_inodes;
  for (const auto& entry : std::filesystem::directory_iterator("/proc/self/fd")) {
    std::error_code ec;
    const auto target = std::filesystem::read_symlink(entry.path(), ec);
    if (ec) continue;
    const std::string text = target.string();
    if (text.rfind("socket:[", 0) == 0) {
      socket_inodes.insert(text.substr(8, text.size() - 9));
    }
  }
  int listeners = 0;
  for (const char* table : {"/proc/net/tcp", "/proc/net/tcp6"}) {
    std::ifstream in(table);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      std::istringstream fields(line);
      std::string sl, local, remote, state;
      fields >> sl >> local >> remote >> state;
      if (state != "0A") continue;  // LISTEN
      std::string skip, inode;
      // tx_queue rx_queue tr:tm->when retrnsmt uid timeout inode
      fields >> skip >> skip >> skip >> skip >> skip >> inode;
      if (socket_inodes.count(inode) > 0) ++listeners;
    }
  }
  return listeners;
}

}  // namespace

TEST_CASE("the full pipeline deploys the example intent") {
  TempDir dir("engine");
  engine::Engine engine(fixtures_config(dir.path()));

  const auto record = engine.submit(read_fixture("intents/listing1.json"));
  CHECK(record.phase == registry::Phase::Deploying);
  CHECK(record.order == std::vector<std::string>{"CNF-1", "CNF-2", "CNF-4"});
  CHECK(record.placement.at("CNF-1") == record.placement.at("CNF-2"));
  CHECK(record.placement.at("CNF-4") != record.placement.at("CNF-2"));
  CHECK(record.links_intra == 1);
  CHECK(record.links_inter == 1);
  CHECK(record.links_cross == 1);
  CHECK(record.decision.approved);
  CHECK(record.ns == "ns-338d10a2-2669-46e1");
  CHECK(record.proxy_injections.at("CNF-1"));
  CHECK(record.network_revisions.size() == 2);

  const auto catalog = engine.catalog();
  CHECK(catalog.reserved_cpu_millicores == 12000);
  CHECK_FALSE(catalog.entries.empty());

  advance_until(engine, "338d10a2-2669-46e1", registry::Phase::Running);

  const json described = json::parse(engine.describe("338d10a2-2669-46e1"));
  CHECK(described.at("service_states").at("CNF-1").at("state") == "Running");
  CHECK(described.at("service_states").at("CNF-4").at("edge") == "Edge2");
  CHECK(described.at("mesh_plans").size() == 2);

  // Every linked service runs with its sidecar flag set (degree >= 1).
  for (const auto* edge_id : {"Edge1", "Edge2"}) {
    for (const auto& workload : engine.edge(edge_id)->workloads()) {
      CHECK(workload.mesh_proxy);
    }
  }

  // Health reports per-edge reconciler liveness.
  const auto health = engine.health();
  CHECK(health.ok);
  REQUIRE(health.edges.size() == 2);
  for (const auto& edge : health.edges) CHECK(edge.ok);

  // Metrics: internal per-edge via selector, external totals only.
  auto query = monitor::parse_query_expr("latest(free_cpu){edge=Edge1}");
  const auto internal = engine.metrics(query, engine::Role::Admin);
  REQUIRE(internal.size() == 1);
  CHECK(internal[0].value == 2000.0);
  CHECK_THROWS_AS(engine.metrics(query, engine::Role::External), CaminoError);

  CHECK(engine.resolve_domain("Domain-Y") == "domain-y.example.net");
  CHECK_THROWS_AS(engine.resolve_domain("Domain-Q"), CaminoError);
}

TEST_CASE("submit error surfaces") {
  TempDir dir("engine");
  engine::Engine engine(fixtures_config(dir.path()));

  SUBCASE("malformed and invalid documents") {
    CHECK_THROWS_AS(engine.submit("{oops"), CaminoError);
    try {
      engine.submit(R"({"domain_name": "Domain-X", "deployment_id": "x",
                        "timestamp": "2026-01-01T00:00:00",
                        "services": [{"package_name": "CNF-1", "version": "v1",
                                      "dependencies": [{"after": "CNF-1", "domain": "Domain-X"}]}]})");
      FAIL("expected SemanticError");
    } catch (const CaminoError& error) {
      CHECK(error.code() == Errc::SemanticError);
    }
  }

  SUBCASE("duplicate deployment ids are rejected") {
    engine.submit(read_fixture("intents/listing1.json"));
    try {
      engine.submit(read_fixture("intents/listing1.json"));
      FAIL("expected DuplicateId");
    } catch (const CaminoError& error) {
      CHECK(error.code() == Errc::DuplicateId);
    }
  }

  SUBCASE("placement failure is recorded and rethrown") {
    CHECK_THROWS_AS(engine.submit(read_fixture("intents/oversize.json")), CapacityError);
    const auto record = engine.status("oversize-507");
    CHECK(record.phase == registry::Phase::Rejected);
    REQUIRE_FALSE(record.decision.reasons.empty());
    CHECK(record.decision.reasons[0].code == "Shortfall");
  }

  SUBCASE("admission rejection embeds the decision") {
    const auto record = engine.submit(read_fixture("intents/ingress.json"));
    CHECK(record.phase == registry::Phase::Rejected);
    CHECK_FALSE(record.decision.approved);
    bool found = false;
    for (const auto& reason : record.decision.reasons) {
      if (reason.code == "MissingCapability" && reason.service == "ingress-app") found = true;
    }
    CHECK(found);
    // Nothing was published anywhere.
    CHECK(engine.package_store().revisions("edge1-deploy").empty());
    CHECK(engine.package_store().revisions("edge2-deploy").empty());
    CHECK(engine.resource_ledger().total().cpu_millicores == 0);
  }
}

TEST_CASE("terminate returns resources and is idempotent") {
  TempDir dir("engine");
  engine::Engine engine(fixtures_config(dir.path()));

  const auto free_before_1 = engine.edge("Edge1")->free();
  const auto free_before_2 = engine.edge("Edge2")->free();

  engine.submit(read_fixture("intents/listing1.json"));
  advance_until(engine, "338d10a2-2669-46e1", registry::Phase::Running);

  const auto terminating = engine.terminate("338d10a2-2669-46e1");
  CHECK(terminating.phase == registry::Phase::Terminating);
  advance_until(engine, "338d10a2-2669-46e1", registry::Phase::Terminated);

  CHECK(engine.edge("Edge1")->free() == free_before_1);
  CHECK(engine.edge("Edge2")->free() == free_before_2);
  CHECK(engine.resource_ledger().total().cpu_millicores == 0);
  CHECK(engine.edge("Edge1")->namespaces().empty());

  // Double terminate is an idempotent no-op.
  CHECK(engine.terminate("338d10a2-2669-46e1").phase == registry::Phase::Terminated);
  CHECK_THROWS_AS(engine.terminate("no-such-id"), CaminoError);
}

TEST_CASE("termination conflicts when an active deployment depends on a service") {
  TempDir dir("engine");
  engine::Engine engine(fixtures_config(dir.path()));
  engine.submit(read_fixture("intents/listing1.json"));

  registry::DeploymentRecord dependent;
  dependent.deployment_id = "dependent";
  dependent.intent = test::make_intent(
      "dependent", {test::make_service("watcher", "v1", {{"CNF-2", "Domain-X", ""}})});
  dependent.phase = registry::Phase::Running;
  dependent.decision.approved = true;
  engine.deployment_registry().put(dependent);

  try {
    engine.terminate("338d10a2-2669-46e1");
    FAIL("expected TerminationConflict");
  } catch (const CaminoError& error) {
    CHECK(error.code() == Errc::TerminationConflict);
    CHECK(std::string(error.what()).find("dependent") != std::string::npos);
  }
  engine.deployment_registry().erase("dependent");
  CHECK(engine.terminate("338d10a2-2669-46e1").phase == registry::Phase::Terminating);
}

TEST_CASE("the registry survives a restart and reconverges to the same phases") {
  TempDir dir("engine");
  {
    engine::Engine engine(fixtures_config(dir.path()));
    engine.submit(read_fixture("intents/listing1.json"));
    advance_until(engine, "338d10a2-2669-46e1", registry::Phase::Running);
  }
  engine::Engine restarted(fixtures_config(dir.path()));
  const auto record = restarted.status("338d10a2-2669-46e1");
  CHECK(record.phase == registry::Phase::Running);
  CHECK(record.order == std::vector<std::string>{"CNF-1", "CNF-2", "CNF-4"});
  CHECK(restarted.resource_ledger().total().cpu_millicores == 12000);

  // The fresh simulators reconverge from the persisted repositories.
  restarted.advance(15);
  int running = 0;
  for (const auto& workload : restarted.edge("Edge1")->workloads()) {
    if (workload.state == edgesim::WorkloadState::Running) ++running;
  }
  CHECK(running == 2);
  CHECK(restarted.status("338d10a2-2669-46e1").phase == registry::Phase::Running);
}

TEST_CASE("pipeline determinism: same inputs, same history") {
  TempDir dir_a("engine");
  TempDir dir_b("engine");
  engine::Engine engine_a(fixtures_config(dir_a.path()));
  engine::Engine engine_b(fixtures_config(dir_b.path()));

  engine_a.submit(read_fixture("intents/listing1.json"));
  engine_b.submit(read_fixture("intents/listing1.json"));
  engine_a.advance(20);
  engine_b.advance(20);

  CHECK(engine_a.describe("338d10a2-2669-46e1") == engine_b.describe("338d10a2-2669-46e1"));
  CHECK(engine_a.export_metrics() == engine_b.export_metrics());
}

TEST_CASE("sequencing on readiness staggers publication") {
  TempDir dir("engine");
  engine::EngineConfig config = fixtures_config(dir.path());
  config.sequence_on_readiness = true;
  engine::Engine engine(config);

  const auto record = engine.submit(read_fixture("intents/listing1.json"));
  CHECK(record.published_services == 1);
  int published = 0;
  for (const auto& revision : engine.package_store().revisions("edge1-deploy")) {
    if (revision.state == store::RevisionState::Published) ++published;
  }
  CHECK(published == 1);  // only CNF-1 so far

  advance_until(engine, "338d10a2-2669-46e1", registry::Phase::Running, 120);
  CHECK(engine.status("338d10a2-2669-46e1").published_services == 3);
}

TEST_CASE("no module besides the domain manager opens a network listener") {
  TempDir dir("engine");
  engine::Engine engine(fixtures_config(dir.path()));
  engine.submit(read_fixture("intents/listing1.json"));
  engine.advance(10);
  CHECK(listening_sockets_of_self() == 0);

  server::DomainManagerServer server(engine);
  const int port = server.start("127.0.0.1", 0);
  CHECK(port > 0);
  CHECK(listening_sockets_of_self() == 1);
  server.stop();
  CHECK(listening_sockets_of_self() == 0);
}

TEST_CASE("the server config file parses with resolved paths") {
  const auto config = engine::EngineConfig::from_json_file(fixtures_dir() / "config/server.json");
  CHECK(config.listen_address == "127.0.0.1:8787");
  CHECK(config.tokens.at("admin-token") == engine::Role::Admin);
  CHECK(config.tokens.at("external-token") == engine::Role::External);
  CHECK(config.trusted_domains.at("Domain-Y") == "domain-y.example.net");
  REQUIRE(config.topology.edges.size() == 2);
  CHECK(config.topology.edges[0].id == "Edge1");
  CHECK(config.topology.edges[0].capacity.cpu_millicores == 12000);
  CHECK(config.mesh_options.external_address == "domain-x.example.net");
  CHECK(config.auto_tick_ms == 25);
  CHECK(config.blueprint_fixtures == fixtures_dir() / "config" / "../blueprints");
}

TEST_CASE("concurrent submissions of distinct deployments both admit") {
  TempDir dir("engine");
  engine::Engine engine(fixtures_config(dir.path()));

  const std::string second = R"({
    "domain_name": "Domain-X", "deployment_id": "second",
    "timestamp": "2026-08-10T09:00:00",
    "services": [{"package_name": "CNF-4", "version": "v2", "qos_level": "default"}]})";

  std::exception_ptr error_a;
  std::exception_ptr error_b;
  std::thread a([&] {
    try {
      engine.submit(read_fixture("intents/listing1.json"));
    } catch (...) {
      error_a = std::current_exception();
    }
  });
  std::thread b([&] {
    try {
      engine.submit(second);
    } catch (...) {
      error_b = std::current_exception();
    }
  });
  a.join();
  b.join();
  CHECK_FALSE(error_a);
  CHECK_FALSE(error_b);

  advance_until(engine, "338d10a2-2669-46e1", registry::Phase::Running);
  advance_until(engine, "second", registry::Phase::Running);
  // 12 cores + 2 cores reserved; no edge over-committed.
  CHECK(engine.resource_ledger().total().cpu_millicores == 14000);
  for (const char* id : {"Edge1", "Edge2"}) {
    const auto* edge = engine.edge(id);
    CHECK(edge->committed().cpu_millicores <= edge->capacity().cpu_millicores);
  }
}

TEST_CASE("cli status maps API errors to a failing exit code") {
  TempDir dir("engine");
  engine::Engine engine(fixtures_config(dir.path()));
  server::DomainManagerServer server(engine);
  const int port = server.start("127.0.0.1", 0);

  cli::ClientOptions options;
  options.server = "http://127.0.0.1:" + std::to_string(port);
  options.token = "admin-token";
  std::ostringstream out, err;
  CHECK(cli::cmd_status(options, "unknown-id", out, err) == 1);
  CHECK(err.str().find("404") != std::string::npos);

  // External tokens see the catalog, with domain totals only.
  options.token = "viewer";
  std::ostringstream out2, err2;
  CHECK(cli::cmd_catalog(options, out2, err2) == 0);
  CHECK(out2.str().find("reserved") != std::string::npos);
  CHECK(out2.str().find("Edge1") == std::string::npos);
  server.stop();
}

TEST_CASE("cli metrics output matches a brute-force sum over the export file") {
  TempDir dir("engine");
  engine::Engine engine(fixtures_config(dir.path()));
  engine.submit(read_fixture("intents/listing1.json"));
  engine.advance(12);

  server::DomainManagerServer server(engine);
  const int port = server.start("127.0.0.1", 0);

  cli::ClientOptions options;
  options.server = "http://127.0.0.1:" + std::to_string(port);
  options.token = "admin-token";
  options.plain = true;
  std::ostringstream out, err;
  REQUIRE(cli::cmd_metrics(options, "sum(free_cpu)", "internal", out, err) == 0);

  double expected = 0.0;
  std::istringstream lines(engine.export_metrics());
  std::string line;
  while (std::getline(lines, line)) {
    const json sample = json::parse(line);
    if (sample.at("name") == "free_cpu") expected += sample.at("value").get<double>();
  }
  const std::string printed = out.str();  // "value=<n>\n"
  REQUIRE(printed.rfind("value=", 0) == 0);
  const double reported = std::stod(printed.substr(6));
  CHECK(reported == doctest::Approx(expected).epsilon(1e-12));
  server.stop();
}
