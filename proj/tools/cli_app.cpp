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

#include "cli_app.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "camino/engine.hpp"
#include "camino/errors.hpp"
#include "camino/scenario.hpp"
#include "camino/server.hpp"

namespace camino::cli {
namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

std::string read_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "cannot read " << path << "\n";
    return {};
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class ApiClient {
 public:
  ApiClient(const ClientOptions& options, std::ostream& err)
      : client_(options.server.empty() ? "http://127.0.0.1:8787" : options.server), err_(err) {
    client_.set_connection_timeout(5);
    client_.set_read_timeout(30);
    if (!options.token.empty()) {
      headers_.emplace("Authorization", "Bearer " + options.token);
    }
  }

  // Returns nullopt on transport failure; HTTP errors pass through.
  std::optional<httplib::Response> get(const std::string& path) {
    return unwrap(client_.Get(path, headers_));
  }
  std::optional<httplib::Response> post(const std::string& path, const std::string& body) {
    return unwrap(client_.Post(path, headers_, body, "application/json"));
  }
  std::optional<httplib::Response> del(const std::string& path) {
    return unwrap(client_.Delete(path, headers_));
  }

 private:
  std::optional<httplib::Response> unwrap(httplib::Result result) {
    if (!result) {
      err_ << "connection failed: " << httplib::to_string(result.error()) << "\n";
      return std::nullopt;
    }
    return *result;
  }

  httplib::Client client_;
  httplib::Headers headers_;
  std::ostream& err_;
};

bool is_success(int status) { return status == 200 || status == 202; }

int report_api_error(const httplib::Response& response, std::ostream& err) {
  err << "HTTP " << response.status << "\n" << response.body << "\n";
  return kFailure;
}

void print_record(const json& record, bool plain, std::ostream& out) {
  if (plain) {
    out << "deployment_id=" << record.at("deployment_id").get<std::string>()
        << " phase=" << record.at("phase").get<std::string>() << "\n";
    if (record.contains("service_states")) {
      for (const auto& [service, state] : record.at("service_states").items()) {
        out << "service=" << service << " edge=" << state.at("edge").get<std::string>()
            << " state=" << state.at("state").get<std::string>() << "\n";
      }
    }
    return;
  }
  out << "deployment " << record.at("deployment_id").get<std::string>() << "\n";
  out << "  phase:     " << record.at("phase").get<std::string>() << "\n";
  if (record.contains("order")) {
    out << "  order:     ";
    bool first = true;
    for (const auto& service : record.at("order")) {
      if (!first) out << " -> ";
      out << service.get<std::string>();
      first = false;
    }
    out << "\n";
  }
  if (record.contains("placement")) {
    out << "  placement:";
    for (const auto& [service, edge] : record.at("placement").items()) {
      out << " " << service << "=" << edge.get<std::string>();
    }
    out << "\n";
  }
  if (record.contains("links")) {
    const auto& links = record.at("links");
    out << "  links:     intra=" << links.at("intra").get<int>()
        << " inter=" << links.at("inter").get<int>()
        << " cross-domain=" << links.at("cross_domain").get<int>() << "\n";
  }
  if (record.contains("service_states")) {
    for (const auto& [service, state] : record.at("service_states").items()) {
      out << "  service " << service << ": " << state.at("state").get<std::string>() << " on "
          << state.at("edge").get<std::string>() << "\n";
    }
  }
  if (record.contains("decision") && !record.at("decision").at("reasons").empty()) {
    out << "  reasons:\n";
    for (const auto& reason : record.at("decision").at("reasons")) {
      out << "    [" << reason.at("code").get<std::string>() << "] "
          << reason.at("service").get<std::string>() << " " << reason.at("detail").get<std::string>()
          << "\n";
    }
  }
}

}  // namespace

int cmd_submit(const ClientOptions& options, const std::string& intent_file, std::ostream& out,
               std::ostream& err) {
  const std::string body = read_file(intent_file, err);
  if (body.empty()) return kUsage;
  ApiClient client(options, err);
  const auto response = client.post("/deployments", body);
  if (!response) return kFailure;
  if (!is_success(response->status) && response->status != 422) {
    return report_api_error(*response, err);
  }
  const json record = json::parse(response->body);
  print_record(record, options.plain, out);
  return response->status == 422 ? kFailure : kOk;
}

int cmd_status(const ClientOptions& options, const std::string& deployment_id, std::ostream& out,
               std::ostream& err) {
  ApiClient client(options, err);
  const auto response = client.get("/deployments/" + deployment_id);
  if (!response) return kFailure;
  if (!is_success(response->status)) return report_api_error(*response, err);
  print_record(json::parse(response->body), options.plain, out);
  return kOk;
}

int cmd_terminate(const ClientOptions& options, const std::string& deployment_id, std::ostream& out,
                  std::ostream& err) {
  ApiClient client(options, err);
  const auto response = client.del("/deployments/" + deployment_id);
  if (!response) return kFailure;
  if (!is_success(response->status)) return report_api_error(*response, err);
  print_record(json::parse(response->body), options.plain, out);
  return kOk;
}

int cmd_catalog(const ClientOptions& options, std::ostream& out, std::ostream& err) {
  ApiClient client(options, err);
  const auto response = client.get("/catalog");
  if (!response) return kFailure;
  if (!is_success(response->status)) return report_api_error(*response, err);
  const json catalog = json::parse(response->body);
  if (options.plain) {
    for (const auto& entry : catalog.at("packages")) {
      out << "package=" << entry.at("package").get<std::string>() << " revisions=";
      bool first = true;
      for (const auto& revision : entry.at("revisions")) {
        if (!first) out << ",";
        out << revision.get<std::string>();
        first = false;
      }
      out << "\n";
    }
    const auto& reserved = catalog.at("reserved");
    out << "reserved_cpu_millicores=" << reserved.at("cpu_millicores").get<std::int64_t>()
        << " reserved_memory_bytes=" << reserved.at("memory_bytes").get<std::int64_t>() << "\n";
    return kOk;
  }
  out << "packages:\n";
  for (const auto& entry : catalog.at("packages")) {
    out << "  " << entry.at("package").get<std::string>() << " [";
    bool first = true;
    for (const auto& revision : entry.at("revisions")) {
      if (!first) out << ", ";
      out << revision.get<std::string>();
      first = false;
    }
    out << "]";
    if (entry.contains("cpu")) out << " cpu=" << entry.at("cpu").get<std::string>();
    if (entry.contains("memory")) out << " memory=" << entry.at("memory").get<std::string>();
    out << "\n";
  }
  const auto& reserved = catalog.at("reserved");
  out << "reserved: cpu " << reserved.at("cpu_millicores").get<std::int64_t>() << "m, memory "
      << reserved.at("memory_bytes").get<std::int64_t>() << " bytes\n";
  return kOk;
}

int cmd_metrics(const ClientOptions& options, const std::string& expr, const std::string& scope,
                std::ostream& out, std::ostream& err) {
  ApiClient client(options, err);
  std::string path = "/metrics?query=" + httplib::detail::encode_url(expr);
  if (!scope.empty()) path += "&scope=" + scope;
  const auto response = client.get(path);
  if (!response) return kFailure;
  if (!is_success(response->status)) return report_api_error(*response, err);
  const json body = json::parse(response->body);
  if (body.at("results").empty()) {
    out << (options.plain ? "empty\n" : "no samples matched\n");
    return kOk;
  }
  for (const auto& result : body.at("results")) {
    if (options.plain) {
      out << "value=" << result.at("value").get<double>() << "\n";
    } else {
      out << expr << " = " << result.at("value").get<double>() << "\n";
    }
  }
  return kOk;
}

int cmd_health(const ClientOptions& options, std::ostream& out, std::ostream& err) {
  ApiClient client(options, err);
  const auto response = client.get("/health");
  if (!response) return kFailure;
  if (!is_success(response->status)) return report_api_error(*response, err);
  const json health = json::parse(response->body);
  if (options.plain) {
    out << "status=" << health.at("status").get<std::string>() << "\n";
    for (const auto& [edge, state] : health.at("edges").items()) {
      out << "edge=" << edge << " reconciler=" << state.at("reconciler").get<std::string>() << "\n";
    }
  } else {
    out << "status: " << health.at("status").get<std::string>() << "\n";
    for (const auto& [edge, state] : health.at("edges").items()) {
      out << "  " << edge << ": reconciler " << state.at("reconciler").get<std::string>()
          << " (tick " << state.at("tick").get<std::int64_t>() << ")\n";
    }
  }
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"camino - intent-based orchestration client"};
  app.require_subcommand(1);

  ClientOptions options;
  app.add_option("--server", options.server, "Domain Manager base URL (default http://127.0.0.1:8787)");
  app.add_option("--token", options.token, "Bearer token");
  app.add_flag("--plain", options.plain, "stable machine-readable output");

  std::string intent_file;
  auto* submit = app.add_subcommand("submit", "submit a deployment intent");
  submit->add_option("file", intent_file, "intent JSON file")->required();

  std::string status_id;
  auto* status = app.add_subcommand("status", "show a deployment record");
  status->add_option("deployment-id", status_id, "deployment id")->required();

  std::string terminate_id;
  auto* terminate = app.add_subcommand("terminate", "terminate a deployment");
  terminate->add_option("deployment-id", terminate_id, "deployment id")->required();

  auto* catalog = app.add_subcommand("catalog", "list blueprint packages and reserved resources");

  std::string metrics_expr;
  std::string metrics_scope;
  auto* metrics = app.add_subcommand("metrics", "query monitoring data, e.g. 'sum(free_cpu)'");
  metrics->add_option("query", metrics_expr, "agg(metric){label=value,...}")->required();
  metrics->add_option("--scope", metrics_scope, "internal or external");

  auto* health = app.add_subcommand("health", "check Domain Manager health");

  std::string scenario_path;
  auto* run_scenario = app.add_subcommand("run-scenario", "run a scenario against an embedded engine");
  run_scenario->add_option("file", scenario_path, "scenario JSON file")->required();

  std::string config_path;
  auto* serve = app.add_subcommand("serve", "run the Domain Manager API server");
  serve->add_option("--config", config_path, "engine config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    std::ostringstream scratch;
    const int code = app.exit(error, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (submit->parsed()) return cmd_submit(options, intent_file, out, err);
    if (status->parsed()) return cmd_status(options, status_id, out, err);
    if (terminate->parsed()) return cmd_terminate(options, terminate_id, out, err);
    if (catalog->parsed()) return cmd_catalog(options, out, err);
    if (metrics->parsed()) return cmd_metrics(options, metrics_expr, metrics_scope, out, err);
    if (health->parsed()) return cmd_health(options, out, err);
    if (run_scenario->parsed()) {
      const scenario::ScenarioReport report = scenario::run_scenario(scenario_path);
      out << report.text;
      return report.passed() ? kOk : kFailure;
    }
    if (serve->parsed()) {
      engine::Engine engine(engine::EngineConfig::from_json_file(config_path));
      server::DomainManagerServer api(engine);
      const int port = api.start();
      out << "listening on port " << port << "\n" << std::flush;
      // Serve until interrupted.
      static std::atomic<bool> stop_requested{false};
      std::signal(SIGINT, [](int) { stop_requested.store(true); });
      std::signal(SIGTERM, [](int) { stop_requested.store(true); });
      while (!stop_requested.load()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
      }
      api.stop();
      return kOk;
    }
  } catch (const CaminoError& error) {
    err << error.what() << "\n";
    return error.code() == Errc::ScenarioParseError ? kUsage : kFailure;
  } catch (const std::exception& error) {
    err << error.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace camino::cli
