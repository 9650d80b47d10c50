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

#include <filesystem>
#include <string>
#include <string_view>

namespace camino::scenario {

struct ScenarioReport {
  int steps_run{0};
  int assertions_passed{0};
  int assertions_failed{0};
  std::string text;

  bool passed() const { return assertions_failed == 0; }
};

// Drives an embedded engine (no network) through a scenario file: ordered
// submit / terminate / advance / assert steps plus final expected
// assertions. The report text is deterministic for a fixed scenario.
// Throws ScenarioParseError for malformed scenarios.
ScenarioReport run_scenario(const std::filesystem::path& path);

// `base_dir` resolves relative paths in the scenario; `state_dir` hosts the
// engine's store and registry (a scratch directory).
ScenarioReport run_scenario_text(std::string_view json_text, const std::filesystem::path& base_dir,
                                 const std::filesystem::path& state_dir);

}  // namespace camino::scenario
