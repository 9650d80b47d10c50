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

#include "camino/server.hpp"

#include <httplib.h>

#include <json.hpp>

#include "camino/errors.hpp"

namespace camino::server {
namespace {

using nlohmann::json;

int status_for(Errc code) {
  switch (code) {
    case Errc::SyntaxError:
    case Errc::SchemaError:
    case Errc::SemanticError:
    case Errc::QuantityError:
    case Errc::CycleError:
    case Errc::DialectError:
    case Errc::DuplicateKey:
    case Errc::UnknownMetric:
      return 400;
    case Errc::Unauthorized:
      return 401;
    case Errc::PolicyViolation:
      return 403;
    case Errc::UnknownDeployment:
    case Errc::UnresolvableDomain:
    case Errc::UnknownRevision:
    case Errc::NotFound:
      return 404;
    case Errc::DuplicateId:
    case Errc::TerminationConflict:
      return 409;
    case Errc::InsufficientCapacity:
      return 507;
    default:
      return 500;
  }
}

void reply_json(httplib::Response& response, int status, const std::string& body) {
  response.status = status;
  response.set_content(body, "application/json");
}

void reply_error(httplib::Response& response, int status, const std::string& code,
                 const std::string& detail) {
  reply_json(response, status, json{{"error", code}, {"detail", detail}}.dump(2));
}

void reply_camino_error(httplib::Response& response, const CaminoError& error) {
  reply_error(response, status_for(error.code()), to_string(error.code()), error.what());
}

}  // namespace

struct DomainManagerServer::Impl {
  httplib::Server server;
};

DomainManagerServer::DomainManagerServer(engine::Engine& engine)
    : engine_(engine), impl_(std::make_unique<Impl>()) {
  auto& server = impl_->server;

  // Returns the caller's role, or replies 401 and returns nullopt.
  auto authenticate = [this](const httplib::Request& request,
                             httplib::Response& response) -> std::optional<engine::Role> {
    const std::string header = request.get_header_value("Authorization");
    if (header.rfind("Bearer ", 0) == 0) {
      if (const auto role = engine_.authenticate(header.substr(7)); role) return role;
    }
    reply_error(response, 401, "Unauthorized", "missing or invalid bearer token");
    return std::nullopt;
  };

  server.Post("/deployments", [this, authenticate](const httplib::Request& request,
                                                   httplib::Response& response) {
    if (!authenticate(request, response)) return;
    try {
      const registry::DeploymentRecord record = engine_.submit(request.body);
      if (!record.decision.approved) {
        reply_json(response, 422, registry::to_json_text(record));
        return;
      }
      reply_json(response, 202, engine_.describe(record.deployment_id));
    } catch (const CapacityError& error) {
      reply_error(response, 507, "InsufficientCapacity", error.what());
    } catch (const CaminoError& error) {
      reply_camino_error(response, error);
    }
  });

  server.Get(R"(/deployments/([^/]+))", [this, authenticate](const httplib::Request& request,
                                                             httplib::Response& response) {
    if (!authenticate(request, response)) return;
    try {
      reply_json(response, 200, engine_.describe(request.matches[1].str()));
    } catch (const CaminoError& error) {
      reply_camino_error(response, error);
    }
  });

  server.Delete(R"(/deployments/([^/]+))", [this, authenticate](const httplib::Request& request,
                                                                httplib::Response& response) {
    if (!authenticate(request, response)) return;
    try {
      const registry::DeploymentRecord record = engine_.terminate(request.matches[1].str());
      const int status = record.phase == registry::Phase::Terminating ? 202 : 200;
      reply_json(response, status, registry::to_json_text(record));
    } catch (const CaminoError& error) {
      reply_camino_error(response, error);
    }
  });

  server.Get("/catalog", [this, authenticate](const httplib::Request& request,
                                              httplib::Response& response) {
    if (!authenticate(request, response)) return;
    reply_json(response, 200, engine::to_json_text(engine_.catalog()));
  });

  server.Get("/metrics", [this, authenticate](const httplib::Request& request,
                                              httplib::Response& response) {
    const auto role = authenticate(request, response);
    if (!role) return;
    try {
      if (!request.has_param("query")) {
        throw CaminoError(Errc::SchemaError, "missing 'query' parameter");
      }
      monitor::MetricQuery query = monitor::parse_query_expr(request.get_param_value("query"));
      if (request.has_param("from")) query.from = std::stoll(request.get_param_value("from"));
      if (request.has_param("to")) query.to = std::stoll(request.get_param_value("to"));
      if (request.has_param("scope")) {
        const std::string scope = request.get_param_value("scope");
        if (scope == "external") query.scope = monitor::Scope::External;
        else if (scope == "internal") query.scope = monitor::Scope::Internal;
        else throw CaminoError(Errc::SchemaError, "scope must be internal or external");
      }
      json results = json::array();
      for (const monitor::QueryResult& result : engine_.metrics(query, *role)) {
        results.push_back({{"labels", result.labels}, {"value", result.value}});
      }
      reply_json(response, 200, json{{"results", std::move(results)}}.dump(2));
    } catch (const CaminoError& error) {
      reply_camino_error(response, error);
    } catch (const std::exception& error) {
      reply_error(response, 400, "SchemaError", error.what());
    }
  });

  server.Get("/health", [this](const httplib::Request&, httplib::Response& response) {
    reply_json(response, 200, engine::to_json_text(engine_.health()));
  });

  server.Get(R"(/domains/([^/]+))", [this, authenticate](const httplib::Request& request,
                                                         httplib::Response& response) {
    if (!authenticate(request, response)) return;
    try {
      const std::string name = request.matches[1].str();
      reply_json(response, 200, json{{"domain", name}, {"fqdn", engine_.resolve_domain(name)}}.dump(2));
    } catch (const CaminoError& error) {
      reply_camino_error(response, error);
    }
  });
}

DomainManagerServer::~DomainManagerServer() { stop(); }

int DomainManagerServer::start() {
  const std::string& address = engine_.config().listen_address;
  const std::size_t colon = address.rfind(':');
  if (colon == std::string::npos) {
    throw CaminoError(Errc::SchemaError, "listen address must be host:port");
  }
  return start(address.substr(0, colon), std::stoi(address.substr(colon + 1)));
}

int DomainManagerServer::start(const std::string& host, int port) {
  auto& server = impl_->server;
  if (port == 0) {
    port_ = server.bind_to_any_port(host);
  } else {
    if (!server.bind_to_port(host, port)) {
      throw CaminoError(Errc::EngineError, "cannot bind " + host + ":" + std::to_string(port));
    }
    port_ = port;
  }
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  server.wait_until_ready();
  return port_;
}

void DomainManagerServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace camino::server
