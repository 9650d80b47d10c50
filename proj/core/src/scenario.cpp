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

#include "camino/scenario.hpp"

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "camino/engine.hpp"
#include "camino/errors.hpp"
#include "camino/quantity.hpp"

namespace camino::scenario {
namespace {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CaminoError(Errc::ScenarioParseError, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class Runner {
 public:
  Runner(const json& doc, const std::filesystem::path& base_dir,
         const std::filesystem::path& state_dir)
      : doc_(doc) {
    if (!doc_.is_object() || !doc_.contains("steps")) {
      throw CaminoError(Errc::ScenarioParseError, "scenario needs a 'steps' array");
    }
    engine::EngineConfig config;
    if (!doc_.contains("topology")) {
      throw CaminoError(Errc::ScenarioParseError, "scenario needs a 'topology' file");
    }
    config.topology = edgesim::TopologyConfig::load(resolve(doc_.at("topology").get<std::string>(), base_dir));
    if (doc_.contains("blueprints")) {
      config.blueprint_fixtures = resolve(doc_.at("blueprints").get<std::string>(), base_dir);
    }
    if (doc_.contains("iesd")) config.iesd_dir = resolve(doc_.at("iesd").get<std::string>(), base_dir);
    if (doc_.contains("trusted_domains")) {
      for (const auto& [domain, fqdn] : doc_.at("trusted_domains").items()) {
        config.trusted_domains[domain] = fqdn.get<std::string>();
      }
    }
    if (doc_.contains("sequence_on_readiness")) {
      config.sequence_on_readiness = doc_.at("sequence_on_readiness").get<bool>();
    }
    config.store_root = state_dir / "store";
    config.registry_path = state_dir / "registry.json";
    config.auto_tick_ms = 0;
    base_dir_ = base_dir;
    engine_ = std::make_unique<engine::Engine>(std::move(config));
  }

  ScenarioReport run() {
    line("scenario " + doc_.value("name", std::string("unnamed")));
    int step_number = 0;
    for (const auto& step : doc_.at("steps")) {
      ++step_number;
      ++report_.steps_run;
      const std::string action = step.at("action").get<std::string>();
      const std::string prefix = "step " + std::to_string(step_number) + " " + action;
      if (action == "submit") {
        const std::string file = step.at("file").get<std::string>();
        try {
          const registry::DeploymentRecord record =
              engine_->submit(read_text_file(resolve(file, base_dir_)));
          line(prefix + " " + file + " -> deployment " + record.deployment_id + " phase " +
               registry::to_string(record.phase));
        } catch (const CaminoError& error) {
          line(prefix + " " + file + " -> error " + to_string(error.code()));
        }
      } else if (action == "terminate") {
        const std::string deployment = step.at("deployment").get<std::string>();
        try {
          const registry::DeploymentRecord record = engine_->terminate(deployment);
          line(prefix + " " + deployment + " -> phase " + registry::to_string(record.phase));
        } catch (const CaminoError& error) {
          line(prefix + " " + deployment + " -> error " + to_string(error.code()));
        }
      } else if (action == "advance") {
        const int ticks = step.at("ticks").get<int>();
        engine_->advance(ticks);
        line(prefix + " " + std::to_string(ticks));
      } else if (action == "assert") {
        line(prefix);
        for (const auto& check : step.at("checks")) run_check(check);
      } else {
        throw CaminoError(Errc::ScenarioParseError, "unknown action '" + action + "'");
      }
    }
    if (doc_.contains("expected")) {
      line("final assertions");
      for (const auto& check : doc_.at("expected")) run_check(check);
    }
    line("result: " + std::string(report_.passed() ? "PASS" : "FAIL") + " (" +
         std::to_string(report_.assertions_passed) + " passed, " +
         std::to_string(report_.assertions_failed) + " failed)");
    return report_;
  }

 private:
  static std::filesystem::path resolve(const std::string& value, const std::filesystem::path& base) {
    const std::filesystem::path path(value);
    return path.is_absolute() ? path : base / path;
  }

  void line(const std::string& text) {
    report_.text += text;
    report_.text += '\n';
  }

  void pass(const std::string& what) {
    ++report_.assertions_passed;
    line("  check " + what + ": pass");
  }

  void fail(const std::string& what, const std::string& expected, const std::string& actual) {
    ++report_.assertions_failed;
    line("  check " + what + ": FAIL expected " + expected + " got " + actual);
  }

  void check_equals(const std::string& what, const std::string& expected, const std::string& actual) {
    if (expected == actual) pass(what);
    else fail(what, expected, actual);
  }

  void run_check(const json& check) {
    const std::string kind = check.at("kind").get<std::string>();
    try {
      if (kind == "phase") {
        const std::string deployment = check.at("deployment").get<std::string>();
        const registry::DeploymentRecord record = engine_->status(deployment);
        check_equals("phase deployment=" + deployment, check.at("equals").get<std::string>(),
                     registry::to_string(record.phase));
      } else if (kind == "order") {
        const std::string deployment = check.at("deployment").get<std::string>();
        const registry::DeploymentRecord record = engine_->status(deployment);
        check_equals("order deployment=" + deployment, check.at("equals").dump(),
                     json(record.order).dump());
      } else if (kind == "placement") {
        const std::string deployment = check.at("deployment").get<std::string>();
        const std::string service = check.at("service").get<std::string>();
        const registry::DeploymentRecord record = engine_->status(deployment);
        const auto it = record.placement.find(service);
        check_equals("placement " + service, check.at("equals").get<std::string>(),
                     it == record.placement.end() ? "<unplaced>" : it->second);
      } else if (kind == "colocated") {
        const std::string deployment = check.at("deployment").get<std::string>();
        const registry::DeploymentRecord record = engine_->status(deployment);
        std::set<std::string> edges;
        for (const auto& service : check.at("services")) {
          const auto it = record.placement.find(service.get<std::string>());
          edges.insert(it == record.placement.end() ? "<unplaced>" : it->second);
        }
        check_equals("colocated", check.at("equals").get<bool>() ? "true" : "false",
                     edges.size() == 1 ? "true" : "false");
      } else if (kind == "links") {
        const std::string deployment = check.at("deployment").get<std::string>();
        const registry::DeploymentRecord record = engine_->status(deployment);
        const std::string expected = "intra=" + std::to_string(check.value("intra", 0)) +
                                     " inter=" + std::to_string(check.value("inter", 0)) +
                                     " cross=" + std::to_string(check.value("cross_domain", 0));
        const std::string actual = "intra=" + std::to_string(record.links_intra) +
                                   " inter=" + std::to_string(record.links_inter) +
                                   " cross=" + std::to_string(record.links_cross);
        check_equals("links deployment=" + deployment, expected, actual);
      } else if (kind == "free") {
        const std::string edge_id = check.at("edge").get<std::string>();
        const edgesim::EdgeSim* edge = engine_->edge(edge_id);
        if (edge == nullptr) {
          fail("free edge=" + edge_id, "edge", "<unknown>");
          return;
        }
        const edgesim::Resources free = edge->free();
        std::string expected;
        std::string actual;
        if (check.contains("cpu_millicores")) {
          expected += "cpu=" + std::to_string(check.at("cpu_millicores").get<std::int64_t>());
          actual += "cpu=" + std::to_string(free.cpu_millicores);
        }
        if (check.contains("memory_bytes")) {
          expected += " memory=" + std::to_string(check.at("memory_bytes").get<std::int64_t>());
          actual += " memory=" + std::to_string(free.memory_bytes);
        }
        check_equals("free edge=" + edge_id, expected, actual);
      } else if (kind == "reserved") {
        const edgesim::Resources reserved = engine_->resource_ledger().total();
        const std::string expected =
            "cpu=" + std::to_string(check.value("cpu_millicores", std::int64_t{0})) +
            " memory=" + std::to_string(check.value("memory_bytes", std::int64_t{0}));
        const std::string actual = "cpu=" + std::to_string(reserved.cpu_millicores) +
                                   " memory=" + std::to_string(reserved.memory_bytes);
        check_equals("reserved", expected, actual);
      } else if (kind == "mesh_objects") {
        const std::string edge_id = check.at("edge").get<std::string>();
        const edgesim::EdgeSim* edge = engine_->edge(edge_id);
        if (edge == nullptr) {
          fail("mesh_objects edge=" + edge_id, "edge", "<unknown>");
          return;
        }
        std::map<std::string, int> counts = edge->config_kind_counts();
        const std::string expected = "routes=" + std::to_string(check.value("routes", 0)) +
                                     " remote_entries=" + std::to_string(check.value("remote_entries", 0)) +
                                     " gateways=" + std::to_string(check.value("gateways", 0));
        const std::string actual = "routes=" + std::to_string(counts["Route"]) +
                                   " remote_entries=" + std::to_string(counts["RemoteEntry"]) +
                                   " gateways=" + std::to_string(counts["Gateway"]);
        check_equals("mesh_objects edge=" + edge_id, expected, actual);
      } else if (kind == "workloads") {
        const std::string edge_id = check.at("edge").get<std::string>();
        const edgesim::EdgeSim* edge = engine_->edge(edge_id);
        if (edge == nullptr) {
          fail("workloads edge=" + edge_id, "edge", "<unknown>");
          return;
        }
        int running = 0;
        for (const edgesim::Workload& workload : edge->workloads()) {
          if (workload.state == edgesim::WorkloadState::Running) ++running;
        }
        check_equals("workloads edge=" + edge_id,
                     std::to_string(check.at("running").get<int>()), std::to_string(running));
      } else {
        throw CaminoError(Errc::ScenarioParseError, "unknown check kind '" + kind + "'");
      }
    } catch (const CaminoError& error) {
      if (error.code() == Errc::ScenarioParseError) throw;
      fail(kind, "<no error>", to_string(error.code()));
    }
  }

  const json& doc_;
  std::filesystem::path base_dir_;
  std::unique_ptr<engine::Engine> engine_;
  ScenarioReport report_;
};

}  // namespace

ScenarioReport run_scenario_text(std::string_view json_text, const std::filesystem::path& base_dir,
                                 const std::filesystem::path& state_dir) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw CaminoError(Errc::ScenarioParseError, "malformed scenario JSON");
  Runner runner(doc, base_dir, state_dir);
  return runner.run();
}

ScenarioReport run_scenario(const std::filesystem::path& path) {
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  const std::filesystem::path state_dir =
      std::filesystem::temp_directory_path() /
      ("camino-scenario-" + std::to_string(static_cast<long long>(stamp)));
  std::filesystem::create_directories(state_dir);
  ScenarioReport report = run_scenario_text(read_text_file(path), path.parent_path(), state_dir);
  std::error_code ec;
  std::filesystem::remove_all(state_dir, ec);
  return report;
}

}  // namespace camino::scenario
