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

#include <doctest.h>

#include "camino/errors.hpp"
#include "camino/quantity.hpp"

using namespace camino;

TEST_CASE("cpu quantities normalize to milli-cores") {
  CHECK(quantity::parse_cpu_millicores(std::int64_t{8}) == 8000);
  CHECK(quantity::parse_cpu_millicores("8") == 8000);
  CHECK(quantity::parse_cpu_millicores("500m") == 500);
  CHECK(quantity::parse_cpu_millicores("1m") == 1);
}

TEST_CASE("bad cpu quantities are rejected") {
  CHECK_THROWS_AS(quantity::parse_cpu_millicores("0"), CaminoError);
  CHECK_THROWS_AS(quantity::parse_cpu_millicores("-2"), CaminoError);
  CHECK_THROWS_AS(quantity::parse_cpu_millicores("2.5"), CaminoError);
  CHECK_THROWS_AS(quantity::parse_cpu_millicores(""), CaminoError);
  CHECK_THROWS_AS(quantity::parse_cpu_millicores("m"), CaminoError);
  CHECK_THROWS_AS(quantity::parse_cpu_millicores(std::int64_t{0}), CaminoError);
}

TEST_CASE("memory binary suffixes") {
  CHECK(quantity::parse_memory_bytes("1Ki") == 1024);
  CHECK(quantity::parse_memory_bytes("1000000Ki") == 1024000000);
  CHECK(quantity::parse_memory_bytes("2Mi") == 2 * 1024 * 1024);
  CHECK(quantity::parse_memory_bytes("16Gi") == 16LL * 1024 * 1024 * 1024);
  CHECK(quantity::parse_memory_bytes("4096") == 4096);
}

TEST_CASE("fractional and malformed memory quantities are rejected") {
  CHECK_THROWS_AS(quantity::parse_memory_bytes("2.5Gi"), CaminoError);
  CHECK_THROWS_AS(quantity::parse_memory_bytes("0Ki"), CaminoError);
  CHECK_THROWS_AS(quantity::parse_memory_bytes("-1"), CaminoError);
  CHECK_THROWS_AS(quantity::parse_memory_bytes("5Ti"), CaminoError);
  CHECK_THROWS_AS(quantity::parse_memory_bytes(""), CaminoError);
  try {
    quantity::parse_memory_bytes("2.5Gi");
  } catch (const CaminoError& error) {
    CHECK(error.code() == Errc::QuantityError);
  }
}

TEST_CASE("formatting") {
  CHECK(quantity::format_millicores(6000) == "6000m");
  CHECK(quantity::format_bytes(1024) == "1Ki");
  CHECK(quantity::format_bytes(17179869184) == "16Gi");
  CHECK(quantity::format_bytes(1000) == "1000");
}
