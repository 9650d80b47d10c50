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
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "camino/edge.hpp"

namespace camino::monitor {

// Fixed series names. Infrastructure metrics carry the edge label only;
// workload metrics carry edge, deployment_id, package and namespace.
//   infra:    capacity_cpu capacity_memory committed_cpu committed_memory
//             free_cpu free_memory
//   workload: usage_cpu usage_memory
bool is_known_metric(const std::string& name);

struct MetricSample {
  std::string name;
  std::map<std::string, std::string> labels;
  double value{0.0};
  std::int64_t tick{0};
  std::uint64_t seq{0};  // ingestion order, breaks `latest` ties

  bool operator==(const MetricSample&) const = default;
};

enum class Aggregation { Sum, Avg, Max, Latest };
enum class Scope { Internal, External };

Aggregation aggregation_from_string(std::string_view text);
const char* to_string(Aggregation aggregation);

struct MetricQuery {
  std::string metric;
  std::map<std::string, std::string> selectors;  // exact match per label
  std::int64_t from{0};
  std::int64_t to{std::numeric_limits<std::int64_t>::max()};
  Aggregation aggregation{Aggregation::Latest};
  Scope scope{Scope::Internal};
};

// Parses "agg(metric)" or "agg(metric){label=value,...}".
MetricQuery parse_query_expr(std::string_view expr);

struct QueryResult {
  std::map<std::string, std::string> labels;  // the selector labels
  double value{0.0};
};

struct AlertRule {
  std::string id;
  std::string metric;
  std::map<std::string, std::string> selectors;
  double threshold{0.0};
  int window{1};  // consecutive ticks above threshold required to fire
};

std::vector<AlertRule> parse_alert_rules(std::string_view json_text);

struct Alert {
  std::string id;  // stable across re-evaluation of the same breach
  std::string rule_id;
  std::map<std::string, std::string> labels;
  std::int64_t start_tick{0};
  std::int64_t end_tick{0};
};

// Central metrics plane over per-edge buffers. Buffers are single-writer
// (the owning edge's collector) and bounded: each holds at most
// `ring_capacity` samples, oldest evicted first. Queries and alert
// evaluation take a consistent snapshot.
class MonitoringPlane {
 public:
  explicit MonitoringPlane(std::size_t ring_capacity = 100000);

  // Pure sample builder: 6 infrastructure samples plus cpu/memory usage per
  // non-Removed workload, stamped with the edge's current tick.
  static std::vector<MetricSample> build_samples(const edgesim::EdgeSim& edge);

  // Builds and ingests into the edge's buffer.
  void collect(const edgesim::EdgeSim& edge);
  void ingest(const std::string& edge_id, std::vector<MetricSample> samples);

  // Filters by metric, selectors and tick range, then aggregates everything
  // into one row keyed by the selector labels. External scope rejects edge
  // selectors (PolicyViolation) and never returns edge-labelled results.
  // Empty vector when nothing matches.
  std::vector<QueryResult> query(const MetricQuery& q) const;

  std::vector<Alert> alerts(const std::vector<AlertRule>& rules) const;

  // One sample per line, JSON, deterministic order.
  std::string export_jsonl() const;

  std::vector<MetricSample> snapshot() const;
  std::size_t sample_count() const;

 private:
  struct Ring {
    std::vector<MetricSample> samples;  // insertion-ordered window
  };

  std::size_t capacity_;
  std::map<std::string, Ring> buffers_;
  std::uint64_t next_seq_{1};
  mutable std::mutex mutex_;
};

}  // namespace camino::monitor
