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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace camino {

// Error taxonomy shared by every subsystem. Value-format violations map to
// SchemaError, relational violations (self-dependency, duplicates, dangling
// references) to SemanticError.
enum class Errc {
  SyntaxError,
  SchemaError,
  SemanticError,
  QuantityError,
  CycleError,
  InsufficientCapacity,
  DuplicateId,
  MissingOwnerEdge,
  DialectError,
  DuplicateKey,
  UnknownRevision,
  ImmutabilityViolation,
  UnresolvedSetter,
  UnknownParameter,
  StorageError,
  UnknownDeployment,
  TerminationConflict,
  MissingEndpointMetadata,
  UnplacedService,
  UnresolvableDomain,
  DanglingLink,
  PolicyViolation,
  UnknownMetric,
  Unauthorized,
  NotFound,
  ScenarioParseError,
  EngineError,
};

const char* to_string(Errc code);

class CaminoError : public std::runtime_error {
 public:
  CaminoError(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Topological ordering failure; `cycle` lists the witness nodes in order,
// with an implied edge from the last node back to the first.
class CycleError : public CaminoError {
 public:
  explicit CycleError(std::vector<std::string> cycle)
      : CaminoError(Errc::CycleError, join(cycle)), cycle_(std::move(cycle)) {}

  const std::vector<std::string>& cycle() const noexcept { return cycle_; }

 private:
  static std::string join(const std::vector<std::string>& nodes);
  std::vector<std::string> cycle_;
};

struct EdgeShortfall {
  std::string edge_id;
  std::int64_t cpu_millicores{0};  // missing cpu, 0 when cpu fits
  std::int64_t memory_bytes{0};    // missing memory, 0 when memory fits
};

// Placement failure: names the first service that fits on no edge and the
// per-edge shortfall for that service.
class CapacityError : public CaminoError {
 public:
  CapacityError(std::string service, std::vector<EdgeShortfall> shortfalls)
      : CaminoError(Errc::InsufficientCapacity, "no edge can host " + service),
        service_(std::move(service)),
        shortfalls_(std::move(shortfalls)) {}

  const std::string& service() const noexcept { return service_; }
  const std::vector<EdgeShortfall>& shortfalls() const noexcept { return shortfalls_; }

 private:
  std::string service_;
  std::vector<EdgeShortfall> shortfalls_;
};

}  // namespace camino
