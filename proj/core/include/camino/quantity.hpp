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

#include <cstdint>
#include <string>
#include <string_view>

namespace camino::quantity {

// Cpu requests are integers (whole cores) or "<n>m" milli-cores; both
// normalize to milli-cores. Memory requests are plain integers (bytes) or
// integers with a binary suffix Ki/Mi/Gi. Fractional values are rejected
// so resource arithmetic stays exact.
std::int64_t parse_cpu_millicores(std::string_view text);
std::int64_t parse_cpu_millicores(std::int64_t cores);
std::int64_t parse_memory_bytes(std::string_view text);

std::string format_millicores(std::int64_t millicores);  // "6000m"
std::string format_bytes(std::int64_t bytes);            // exact suffix when divisible

}  // namespace camino::quantity
