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

#include "camino/quantity.hpp"

#include <cctype>

#include "camino/errors.hpp"

namespace camino::quantity {
namespace {

bool parse_positive_integer(std::string_view digits, std::int64_t& out) {
  if (digits.empty()) return false;
  std::int64_t value = 0;
  for (const char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    if (value > (INT64_MAX - (c - '0')) / 10) return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  return value > 0;
}

}  // namespace

std::int64_t parse_cpu_millicores(std::string_view text) {
  std::int64_t value = 0;
  if (!text.empty() && text.back() == 'm') {
    if (!parse_positive_integer(text.substr(0, text.size() - 1), value)) {
      throw CaminoError(Errc::QuantityError, "bad cpu quantity '" + std::string(text) + "'");
    }
    return value;
  }
  if (!parse_positive_integer(text, value)) {
    throw CaminoError(Errc::QuantityError, "bad cpu quantity '" + std::string(text) + "'");
  }
  return value * 1000;
}

std::int64_t parse_cpu_millicores(std::int64_t cores) {
  if (cores <= 0) throw CaminoError(Errc::QuantityError, "cpu must be positive");
  return cores * 1000;
}

std::int64_t parse_memory_bytes(std::string_view text) {
  std::int64_t multiplier = 1;
  std::string_view digits = text;
  if (text.size() >= 2 && text.back() == 'i') {
    const char prefix = text[text.size() - 2];
    if (prefix == 'K') multiplier = 1024;
    else if (prefix == 'M') multiplier = 1024LL * 1024;
    else if (prefix == 'G') multiplier = 1024LL * 1024 * 1024;
    else throw CaminoError(Errc::QuantityError, "bad memory suffix '" + std::string(text) + "'");
    digits = text.substr(0, text.size() - 2);
  }
  std::int64_t value = 0;
  if (!parse_positive_integer(digits, value)) {
    throw CaminoError(Errc::QuantityError, "bad memory quantity '" + std::string(text) + "'");
  }
  if (value > INT64_MAX / multiplier) {
    throw CaminoError(Errc::QuantityError, "memory quantity overflows");
  }
  return value * multiplier;
}

std::string format_millicores(std::int64_t millicores) {
  return std::to_string(millicores) + "m";
}

std::string format_bytes(std::int64_t bytes) {
  constexpr std::int64_t kKi = 1024;
  constexpr std::int64_t kMi = kKi * 1024;
  constexpr std::int64_t kGi = kMi * 1024;
  if (bytes >= kGi && bytes % kGi == 0) return std::to_string(bytes / kGi) + "Gi";
  if (bytes >= kMi && bytes % kMi == 0) return std::to_string(bytes / kMi) + "Mi";
  if (bytes >= kKi && bytes % kKi == 0) return std::to_string(bytes / kKi) + "Ki";
  return std::to_string(bytes);
}

}  // namespace camino::quantity
