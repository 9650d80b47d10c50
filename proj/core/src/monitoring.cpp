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

#include "camino/monitoring.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "camino/errors.hpp"
#include "camino/rand.hpp"

namespace camino::monitor {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const std::set<std::string>& known_metrics() {
  static const std::set<std::string> kMetrics = {
      "capacity_cpu", "capacity_memory", "committed_cpu", "committed_memory",
      "free_cpu",     "free_memory",     "usage_cpu",     "usage_memory"};
  return kMetrics;
}

bool matches(const MetricSample& sample, const MetricQuery& q) {
  if (sample.name != q.metric) return false;
  if (sample.tick < q.from || sample.tick > q.to) return false;
  for (const auto& [key, value] : q.selectors) {
    const auto it = sample.labels.find(key);
    if (it == sample.labels.end() || it->second != value) return false;
  }
  return true;
}

std::string label_fingerprint(const std::map<std::string, std::string>& labels) {
  std::string out;
  for (const auto& [key, value] : labels) {
    out += key;
    out += '=';
    out += value;
    out += ';';
  }
  return out;
}

}  // namespace

bool is_known_metric(const std::string& name) { return known_metrics().count(name) > 0; }

Aggregation aggregation_from_string(std::string_view text) {
  if (text == "sum") return Aggregation::Sum;
  if (text == "avg") return Aggregation::Avg;
  if (text == "max") return Aggregation::Max;
  if (text == "latest") return Aggregation::Latest;
  throw CaminoError(Errc::SchemaError, "unknown aggregation '" + std::string(text) + "'");
}

const char* to_string(Aggregation aggregation) {
  switch (aggregation) {
    case Aggregation::Sum: return "sum";
    case Aggregation::Avg: return "avg";
    case Aggregation::Max: return "max";
    case Aggregation::Latest: return "latest";
  }
  return "latest";
}

MetricQuery parse_query_expr(std::string_view expr) {
  const std::size_t open = expr.find('(');
  const std::size_t close = expr.find(')', open == std::string_view::npos ? 0 : open);
  if (open == std::string_view::npos || close == std::string_view::npos || open == 0) {
    throw CaminoError(Errc::SchemaError, "expected agg(metric){label=value,...}");
  }
  MetricQuery query;
  query.aggregation = aggregation_from_string(expr.substr(0, open));
  query.metric = std::string(expr.substr(open + 1, close - open - 1));
  std::string_view tail = expr.substr(close + 1);
  if (!tail.empty()) {
    if (tail.front() != '{' || tail.back() != '}') {
      throw CaminoError(Errc::SchemaError, "bad selector block in query expression");
    }
    tail = tail.substr(1, tail.size() - 2);
    std::size_t start = 0;
    while (start < tail.size()) {
      std::size_t comma = tail.find(',', start);
      if (comma == std::string_view::npos) comma = tail.size();
      const std::string_view pair = tail.substr(start, comma - start);
      const std::size_t eq = pair.find('=');
      if (eq == std::string_view::npos || eq == 0 || eq + 1 > pair.size()) {
        throw CaminoError(Errc::SchemaError, "bad selector '" + std::string(pair) + "'");
      }
      query.selectors[std::string(pair.substr(0, eq))] = std::string(pair.substr(eq + 1));
      start = comma + 1;
    }
  }
  return query;
}

std::vector<AlertRule> parse_alert_rules(std::string_view json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) {
    throw CaminoError(Errc::SchemaError, "alert rules must be a JSON array");
  }
  std::vector<AlertRule> rules;
  for (const auto& entry : doc) {
    AlertRule rule;
    rule.id = entry.at("id").get<std::string>();
    rule.metric = entry.at("metric").get<std::string>();
    if (!is_known_metric(rule.metric)) {
      throw CaminoError(Errc::UnknownMetric, "alert rule metric '" + rule.metric + "'");
    }
    if (entry.contains("selectors")) {
      for (const auto& [key, value] : entry.at("selectors").items()) {
        rule.selectors[key] = value.get<std::string>();
      }
    }
    rule.threshold = entry.at("threshold").get<double>();
    rule.window = entry.at("window").get<int>();
    if (rule.window < 1) throw CaminoError(Errc::SchemaError, "alert window must be >= 1");
    rules.push_back(std::move(rule));
  }
  return rules;
}

MonitoringPlane::MonitoringPlane(std::size_t ring_capacity) : capacity_(ring_capacity) {}

std::vector<MetricSample> MonitoringPlane::build_samples(const edgesim::EdgeSim& edge) {
  const std::int64_t tick = edge.tick();
  const edgesim::Resources capacity = edge.capacity();
  const edgesim::Resources committed = edge.committed();
  const edgesim::Resources free = edge.free();

  std::vector<MetricSample> out;
  const std::map<std::string, std::string> infra_labels = {{"edge", edge.id()}};
  auto infra = [&](const char* name, std::int64_t value) {
    MetricSample sample;
    sample.name = name;
    sample.labels = infra_labels;
    sample.value = static_cast<double>(value);
    sample.tick = tick;
    out.push_back(std::move(sample));
  };
  infra("capacity_cpu", capacity.cpu_millicores);
  infra("committed_cpu", committed.cpu_millicores);
  infra("free_cpu", free.cpu_millicores);
  infra("capacity_memory", capacity.memory_bytes);
  infra("committed_memory", committed.memory_bytes);
  infra("free_memory", free.memory_bytes);

  for (const edgesim::Workload& workload : edge.workloads()) {
    const std::map<std::string, std::string> labels = {{"edge", edge.id()},
                                                       {"deployment_id", workload.deployment_id},
                                                       {"package", workload.service},
                                                       {"namespace", workload.ns}};
    const bool running = workload.state == edgesim::WorkloadState::Running;
    MetricSample cpu;
    cpu.name = "usage_cpu";
    cpu.labels = labels;
    cpu.value = running ? static_cast<double>(workload.requests.cpu_millicores) *
                              edge.usage_factor(workload.id, tick, false)
                        : 0.0;
    cpu.tick = tick;
    out.push_back(std::move(cpu));
    MetricSample memory;
    memory.name = "usage_memory";
    memory.labels = labels;
    memory.value = running ? static_cast<double>(workload.requests.memory_bytes) *
                                 edge.usage_factor(workload.id, tick, true)
                           : 0.0;
    memory.tick = tick;
    out.push_back(std::move(memory));
  }
  return out;
}

void MonitoringPlane::collect(const edgesim::EdgeSim& edge) {
  ingest(edge.id(), build_samples(edge));
}

void MonitoringPlane::ingest(const std::string& edge_id, std::vector<MetricSample> samples) {
  std::lock_guard lock(mutex_);
  Ring& ring = buffers_[edge_id];
  for (MetricSample& sample : samples) {
    sample.seq = next_seq_++;
    ring.samples.push_back(std::move(sample));
  }
  if (ring.samples.size() > capacity_) {
    ring.samples.erase(ring.samples.begin(),
                       ring.samples.begin() + static_cast<std::ptrdiff_t>(ring.samples.size() - capacity_));
  }
}

std::vector<QueryResult> MonitoringPlane::query(const MetricQuery& q) const {
  if (!is_known_metric(q.metric)) {
    throw CaminoError(Errc::UnknownMetric, "unknown metric '" + q.metric + "'");
  }
  if (q.scope == Scope::External && q.selectors.count("edge") > 0) {
    throw CaminoError(Errc::PolicyViolation,
                      "external scope permits only edge-label-free aggregates");
  }
  if (q.from > q.to) throw CaminoError(Errc::SchemaError, "query range is empty");

  std::lock_guard lock(mutex_);
  bool any = false;
  double sum = 0.0;
  double max_value = 0.0;
  std::size_t count = 0;
  double latest_value = 0.0;
  std::pair<std::int64_t, std::uint64_t> latest_key{std::numeric_limits<std::int64_t>::min(), 0};

  for (const auto& [edge_id, ring] : buffers_) {
    (void)edge_id;
    for (const MetricSample& sample : ring.samples) {
      if (!matches(sample, q)) continue;
      any = true;
      sum += sample.value;
      ++count;
      if (count == 1 || sample.value > max_value) max_value = sample.value;
      const std::pair<std::int64_t, std::uint64_t> key{sample.tick, sample.seq};
      if (key > latest_key) {
        latest_key = key;
        latest_value = sample.value;
      }
    }
  }
  if (!any) return {};

  QueryResult result;
  result.labels = q.selectors;
  switch (q.aggregation) {
    case Aggregation::Sum: result.value = sum; break;
    case Aggregation::Avg: result.value = sum / static_cast<double>(count); break;
    case Aggregation::Max: result.value = max_value; break;
    case Aggregation::Latest: result.value = latest_value; break;
  }
  return {result};
}

std::vector<Alert> MonitoringPlane::alerts(const std::vector<AlertRule>& rules) const {
  std::lock_guard lock(mutex_);
  std::vector<Alert> alerts;
  for (const AlertRule& rule : rules) {
    // Group matching samples into series by their full label set.
    std::map<std::string, std::pair<std::map<std::string, std::string>,
                                    std::map<std::int64_t, std::pair<std::uint64_t, double>>>>
        series;
    for (const auto& [edge_id, ring] : buffers_) {
      (void)edge_id;
      for (const MetricSample& sample : ring.samples) {
        if (sample.name != rule.metric) continue;
        bool selected = true;
        for (const auto& [key, value] : rule.selectors) {
          const auto it = sample.labels.find(key);
          if (it == sample.labels.end() || it->second != value) {
            selected = false;
            break;
          }
        }
        if (!selected) continue;
        auto& [labels, ticks] = series[label_fingerprint(sample.labels)];
        labels = sample.labels;
        auto& cell = ticks[sample.tick];
        if (cell.first <= sample.seq) cell = {sample.seq, sample.value};
      }
    }

    for (const auto& [fingerprint, entry] : series) {
      (void)fingerprint;
      const auto& [labels, ticks] = entry;
      // Maximal runs of consecutive breached ticks.
      std::int64_t run_start = 0;
      std::int64_t previous = 0;
      int run_length = 0;
      auto flush = [&](std::int64_t run_end) {
        if (run_length >= rule.window) {
          Alert alert;
          alert.rule_id = rule.id;
          alert.labels = labels;
          alert.start_tick = run_start;
          alert.end_tick = run_end;
          const std::uint64_t hash = fnv1a(
              rule.id + "|" + rule.metric + "|" + label_fingerprint(labels) + "|" +
              std::to_string(run_start));
          char buffer[2 + 16 + 1];
          std::snprintf(buffer, sizeof buffer, "a-%016llx",
                        static_cast<unsigned long long>(hash));
          alert.id = buffer;
          alerts.push_back(std::move(alert));
        }
        run_length = 0;
      };
      for (const auto& [tick, cell] : ticks) {
        const bool breached = cell.second > rule.threshold;
        if (breached) {
          if (run_length > 0 && tick == previous + 1) {
            ++run_length;
          } else {
            if (run_length > 0) flush(previous);
            run_start = tick;
            run_length = 1;
          }
          previous = tick;
        } else if (run_length > 0) {
          flush(previous);
        }
      }
      if (run_length > 0) flush(previous);
    }
  }
  std::sort(alerts.begin(), alerts.end(), [](const Alert& a, const Alert& b) {
    return std::tie(a.rule_id, a.start_tick, a.id) < std::tie(b.rule_id, b.start_tick, b.id);
  });
  return alerts;
}

std::string MonitoringPlane::export_jsonl() const {
  std::lock_guard lock(mutex_);
  std::string out;
  for (const auto& [edge_id, ring] : buffers_) {
    (void)edge_id;
    for (const MetricSample& sample : ring.samples) {
      ordered_json line;
      line["name"] = sample.name;
      line["labels"] = sample.labels;
      line["value"] = sample.value;
      line["tick"] = sample.tick;
      out += line.dump();
      out += '\n';
    }
  }
  return out;
}

std::vector<MetricSample> MonitoringPlane::snapshot() const {
  std::lock_guard lock(mutex_);
  std::vector<MetricSample> out;
  for (const auto& [edge_id, ring] : buffers_) {
    (void)edge_id;
    out.insert(out.end(), ring.samples.begin(), ring.samples.end());
  }
  return out;
}

std::size_t MonitoringPlane::sample_count() const {
  std::lock_guard lock(mutex_);
  std::size_t total = 0;
  for (const auto& [edge_id, ring] : buffers_) {
    (void)edge_id;
    total += ring.samples.size();
  }
  return total;
}

}  // namespace camino::monitor
