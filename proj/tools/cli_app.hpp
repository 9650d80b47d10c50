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

#include <iosfwd>
#include <string>

namespace camino::cli {

// Exit codes: 0 success / scenario pass, 1 API error or failed assertion,
// 2 usage or IO error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct ClientOptions {
  std::string server;  // e.g. http://127.0.0.1:8787
  std::string token;
  bool plain{false};
};

// Thin wrappers over the HTTP API; they render into `out` and return the
// process exit code. Exposed for tests.
int cmd_submit(const ClientOptions& options, const std::string& intent_file, std::ostream& out,
               std::ostream& err);
int cmd_status(const ClientOptions& options, const std::string& deployment_id, std::ostream& out,
               std::ostream& err);
int cmd_terminate(const ClientOptions& options, const std::string& deployment_id, std::ostream& out,
                  std::ostream& err);
int cmd_catalog(const ClientOptions& options, std::ostream& out, std::ostream& err);
int cmd_metrics(const ClientOptions& options, const std::string& expr, const std::string& scope,
                std::ostream& out, std::ostream& err);
int cmd_health(const ClientOptions& options, std::ostream& out, std::ostream& err);

}  // namespace camino::cli
