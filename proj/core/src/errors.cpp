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

#include "camino/errors.hpp"

namespace camino {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::SchemaError: return "SchemaError";
    case Errc::SemanticError: return "SemanticError";
    case Errc::QuantityError: return "QuantityError";
    case Errc::CycleError: return "CycleError";
    case Errc::InsufficientCapacity: return "InsufficientCapacity";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::MissingOwnerEdge: return "MissingOwnerEdge";
    case Errc::DialectError: return "DialectError";
    case Errc::DuplicateKey: return "DuplicateKeyError";
    case Errc::UnknownRevision: return "UnknownRevision";
    case Errc::ImmutabilityViolation: return "ImmutabilityViolation";
    case Errc::UnresolvedSetter: return "UnresolvedSetter";
    case Errc::UnknownParameter: return "UnknownParameter";
    case Errc::StorageError: return "StorageError";
    case Errc::UnknownDeployment: return "UnknownDeployment";
    case Errc::TerminationConflict: return "TerminationConflict";
    case Errc::MissingEndpointMetadata: return "MissingEndpointMetadata";
    case Errc::UnplacedService: return "UnplacedService";
    case Errc::UnresolvableDomain: return "UnresolvableDomain";
    case Errc::DanglingLink: return "DanglingLink";
    case Errc::PolicyViolation: return "PolicyViolation";
    case Errc::UnknownMetric: return "UnknownMetric";
    case Errc::Unauthorized: return "Unauthorized";
    case Errc::NotFound: return "NotFound";
    case Errc::ScenarioParseError: return "ScenarioParseError";
    case Errc::EngineError: return "EngineError";
  }
  return "UnknownError";
}

std::string CycleError::join(const std::vector<std::string>& nodes) {
  std::string out = "cycle [";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0) out += " -> ";
    out += nodes[i];
  }
  out += "]";
  return out;
}

}  // namespace camino
