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

#include <memory>
#include <string>
#include <thread>

#include "camino/engine.hpp"

namespace camino::server {

// The northbound HTTP/JSON API; the single network listener in the system.
//
//   POST   /deployments        submit a deployment intent
//   GET    /deployments/{id}   deployment record + live service states
//   DELETE /deployments/{id}   termination intent
//   GET    /catalog            blueprint catalog + total reserved resources
//   GET    /metrics            monitoring queries
//   GET    /health             liveness, unauthenticated
//   GET    /domains/{name}     trusted-domain resolution
//
// All other endpoints require "Authorization: Bearer <token>"; tokens carry
// the admin or external role. Metrics queries from external tokens are
// forced to external scope.
class DomainManagerServer {
 public:
  explicit DomainManagerServer(engine::Engine& engine);
  ~DomainManagerServer();

  // Binds the configured listen address (or the given host/port); returns
  // the bound port. Serves on a background thread.
  int start();
  int start(const std::string& host, int port);
  void stop();

  int port() const { return port_; }

 private:
  struct Impl;
  engine::Engine& engine_;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_{0};
};

}  // namespace camino::server
