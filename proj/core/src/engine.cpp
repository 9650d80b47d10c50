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

#include "camino/engine.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "camino/errors.hpp"
#include "camino/planner.hpp"
#include "camino/quantity.hpp"

namespace camino::engine {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CaminoError(Errc::StorageError, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string lowercase(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return text;
}

std::filesystem::path resolve_path(const std::string& value, const std::filesystem::path& base) {
  const std::filesystem::path path(value);
  return path.is_absolute() ? path : base / path;
}

int revision_number(const std::string& label) { return std::stoi(label.substr(1)); }

}  // namespace

EngineConfig EngineConfig::from_json_text(std::string_view text, const std::filesystem::path& base_dir) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw CaminoError(Errc::SyntaxError, "malformed engine config");

  EngineConfig config;
  if (doc.contains("listen")) config.listen_address = doc.at("listen").get<std::string>();
  if (doc.contains("tokens")) {
    for (const auto& entry : doc.at("tokens")) {
      const auto role = entry.at("role").get<std::string>();
      if (role != "admin" && role != "external") {
        throw CaminoError(Errc::SchemaError, "token role must be admin or external");
      }
      config.tokens[entry.at("token").get<std::string>()] =
          role == "admin" ? Role::Admin : Role::External;
    }
  }
  if (doc.contains("trusted_domains")) {
    for (const auto& [domain, fqdn] : doc.at("trusted_domains").items()) {
      config.trusted_domains[domain] = fqdn.get<std::string>();
    }
  }
  if (doc.contains("topology")) {
    const auto& topology = doc.at("topology");
    if (topology.is_string()) {
      config.topology = edgesim::TopologyConfig::load(resolve_path(topology.get<std::string>(), base_dir));
    } else {
      config.topology = edgesim::TopologyConfig::from_json_text(topology.dump());
    }
  }
  if (doc.contains("store_root")) {
    config.store_root = resolve_path(doc.at("store_root").get<std::string>(), base_dir);
  }
  if (doc.contains("registry_path")) {
    config.registry_path = resolve_path(doc.at("registry_path").get<std::string>(), base_dir);
  }
  if (doc.contains("blueprints")) {
    config.blueprint_fixtures = resolve_path(doc.at("blueprints").get<std::string>(), base_dir);
  }
  if (doc.contains("iesd")) config.iesd_dir = resolve_path(doc.at("iesd").get<std::string>(), base_dir);
  if (doc.contains("auto_tick_ms")) config.auto_tick_ms = doc.at("auto_tick_ms").get<int>();
  if (doc.contains("metrics_ring_capacity")) {
    config.metrics_ring_capacity = doc.at("metrics_ring_capacity").get<std::size_t>();
  }
  if (doc.contains("sequence_on_readiness")) {
    config.sequence_on_readiness = doc.at("sequence_on_readiness").get<bool>();
  }
  if (doc.contains("mesh")) {
    const auto& mesh = doc.at("mesh");
    if (mesh.contains("external_address")) {
      config.mesh_options.external_address = mesh.at("external_address").get<std::string>();
    }
    if (mesh.contains("gateway_base_port")) {
      config.mesh_options.gateway_base_port = mesh.at("gateway_base_port").get<int>();
    }
    if (mesh.contains("cross_domain_port")) {
      config.mesh_options.cross_domain_port = mesh.at("cross_domain_port").get<int>();
    }
  }
  return config;
}

EngineConfig EngineConfig::from_json_file(const std::filesystem::path& path) {
  return from_json_text(read_text_file(path), path.parent_path());
}

std::string to_json_text(const HealthReport& report) {
  ordered_json doc;
  doc["status"] = report.ok ? "ok" : "degraded";
  doc["store"] = report.store_ok ? "ok" : "failed";
  doc["monitoring"] = report.monitoring_ok ? "ok" : "failed";
  ordered_json edges = ordered_json::object();
  for (const HealthReport::EdgeHealth& edge : report.edges) {
    edges[edge.edge_id] = {{"reconciler", edge.ok ? "ok" : "stale"},
                           {"tick", edge.tick},
                           {"last_reconcile_tick", edge.last_reconcile_tick}};
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2);
}

std::string to_json_text(const CatalogReport& report) {
  ordered_json doc;
  ordered_json packages = ordered_json::array();
  for (const store::CatalogEntry& entry : report.entries) {
    ordered_json item;
    item["package"] = entry.package;
    item["revisions"] = entry.revisions;
    if (entry.cpu_request) item["cpu"] = *entry.cpu_request;
    if (entry.memory_request) item["memory"] = *entry.memory_request;
    ordered_json endpoints = ordered_json::array();
    for (const intent::Endpoint& endpoint : entry.endpoints) {
      endpoints.push_back({{"host", endpoint.host},
                           {"port", endpoint.port},
                           {"protocol", intent::to_string(endpoint.protocol)}});
    }
    item["endpoints"] = std::move(endpoints);
    packages.push_back(std::move(item));
  }
  doc["packages"] = std::move(packages);
  doc["reserved"] = {{"cpu_millicores", report.reserved_cpu_millicores},
                     {"memory_bytes", report.reserved_memory_bytes}};
  return doc.dump(2);
}

Engine::Engine(EngineConfig config) : config_(std::move(config)) {
  if (config_.topology.edges.empty()) {
    throw CaminoError(Errc::EngineError, "engine needs at least one edge");
  }
  store_ = std::make_unique<store::PackageStore>(config_.store_root);
  registry_ = std::make_unique<registry::DeploymentRegistry>(config_.registry_path);
  monitoring_ = std::make_unique<monitor::MonitoringPlane>(config_.metrics_ring_capacity);
  admission_ = std::make_unique<admission::AdmissionController>(*store_, ledger_);

  if (!store_->has_repository(config_.blueprint_repo)) {
    store_->register_repository(config_.blueprint_repo, store::RepoKind::Blueprint);
  }

  for (edgesim::EdgeSpec spec : config_.topology.edges) {
    if (spec.deployment_repo.empty()) spec.deployment_repo = lowercase(spec.id) + "-deploy";
    if (!store_->has_repository(spec.deployment_repo)) {
      store_->register_repository(spec.deployment_repo, store::RepoKind::Deployment, spec.id);
    }
    edge_repos_[spec.id] = spec.deployment_repo;
    auto edge = std::make_unique<edgesim::EdgeSim>(spec);
    edge->attach_store(store_.get());
    edge->set_on_tick([this](edgesim::EdgeSim& e) { monitoring_->collect(e); });
    edges_.push_back(std::move(edge));
  }

  if (!config_.blueprint_fixtures.empty()) import_blueprints(config_.blueprint_fixtures);
  if (!config_.iesd_dir.empty()) load_descriptors(config_.iesd_dir);
  rebuild_ledger();

  if (config_.auto_tick_ms > 0) start_ticker();
}

Engine::~Engine() { stop_ticker(); }

void Engine::import_blueprints(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir)) {
    throw CaminoError(Errc::StorageError, "blueprint fixtures not found at " + dir.string());
  }
  std::vector<std::filesystem::path> packages;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_directory()) packages.push_back(entry.path());
  }
  std::sort(packages.begin(), packages.end());
  for (const std::filesystem::path& package_dir : packages) {
    const std::string package = package_dir.filename().string();
    std::vector<std::filesystem::path> revisions;
    for (const auto& entry : std::filesystem::directory_iterator(package_dir)) {
      if (entry.is_directory()) revisions.push_back(entry.path());
    }
    std::sort(revisions.begin(), revisions.end(),
              [](const std::filesystem::path& a, const std::filesystem::path& b) {
                return revision_number(a.filename().string()) < revision_number(b.filename().string());
              });
    for (const std::filesystem::path& revision_dir : revisions) {
      const std::string label = revision_dir.filename().string();
      try {
        store_->get_revision(config_.blueprint_repo, package, label);
        continue;  // already imported on a previous boot
      } catch (const CaminoError&) {
      }
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(revision_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".cmf") {
          files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
      std::vector<manifest::Document> manifests;
      for (const std::filesystem::path& file : files) {
        manifests.push_back(manifest::parse(read_text_file(file)));
      }
      store_->create_revision(config_.blueprint_repo, package, label, std::move(manifests));
      store_->publish(config_.blueprint_repo, package, label);
    }
  }
}

void Engine::load_descriptors(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir)) {
    throw CaminoError(Errc::StorageError, "IESD directory not found at " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const std::filesystem::path& file : files) {
    intent::PackageDescriptor descriptor = intent::parse_package_descriptor(read_text_file(file));
    descriptors_[descriptor.name] = std::move(descriptor);
  }
}

void Engine::add_descriptor(intent::PackageDescriptor descriptor) {
  descriptors_[descriptor.name] = std::move(descriptor);
}

void Engine::rebuild_ledger() {
  for (const registry::DeploymentRecord& record : registry_->all()) {
    if (registry::is_terminal(record.phase)) continue;
    if (!record.decision.approved) continue;
    std::map<std::string, edgesim::Resources> per_edge;
    for (const auto& [edge, entries] : record.decision.resource_plan) {
      edgesim::Resources total;
      for (const registry::ResourcePlanEntry& entry : entries) {
        total += edgesim::Resources{entry.cpu_millicores, entry.memory_bytes};
      }
      per_edge[edge] = total;
    }
    ledger_.reserve(record.deployment_id, per_edge);
  }
}

edgesim::EdgeSim* Engine::edge(const std::string& id) {
  for (const auto& edge : edges_) {
    if (edge->id() == id) return edge.get();
  }
  return nullptr;
}

std::vector<const edgesim::EdgeSim*> Engine::edge_views() const {
  std::vector<const edgesim::EdgeSim*> out;
  out.reserve(edges_.size());
  for (const auto& edge : edges_) out.push_back(edge.get());
  return out;
}

std::optional<Role> Engine::authenticate(const std::string& token) const {
  const auto it = config_.tokens.find(token);
  if (it == config_.tokens.end()) return std::nullopt;
  return it->second;
}

registry::DeploymentRecord Engine::submit(std::string_view intent_json) {
  const intent::DeploymentIntent parsed = intent::parse_deployment_intent(intent_json);
  if (registry_->contains(parsed.deployment_id)) {
    throw CaminoError(Errc::DuplicateId, "deployment '" + parsed.deployment_id + "' already exists");
  }

  std::map<std::string, intent::PackageDescriptor> requirements;
  for (const intent::ServiceSpec& spec : parsed.services) {
    const auto it = descriptors_.find(spec.package_name);
    if (it == descriptors_.end()) {
      throw CaminoError(Errc::SemanticError, "no IESD descriptor for package " + spec.package_name);
    }
    requirements[spec.package_name] = it->second;
  }

  const planner::DependencyGraph graph = planner::build_graph(parsed);
  const std::vector<std::string> order = planner::order_services(graph);

  registry::DeploymentRecord record;
  record.deployment_id = parsed.deployment_id;
  record.intent = parsed;
  record.order = order;
  record.ns = intent::deployment_namespace(parsed.deployment_id);
  record.decision.deployment_id = parsed.deployment_id;

  // Placement against capacity minus ledger reservations.
  std::vector<planner::EdgeInventory> inventory;
  for (const auto& edge : edges_) {
    edgesim::Resources available = edge->capacity();
    available -= ledger_.reserved(edge->id());
    inventory.push_back({edge->id(), available.cpu_millicores, available.memory_bytes});
  }
  try {
    record.placement = planner::place_services(parsed, requirements, inventory);
  } catch (const CapacityError& error) {
    record.phase = registry::Phase::Rejected;
    record.decision.approved = false;
    for (const EdgeShortfall& shortfall : error.shortfalls()) {
      std::string detail = shortfall.edge_id;
      if (shortfall.cpu_millicores > 0) {
        detail += " cpu " + quantity::format_millicores(shortfall.cpu_millicores);
      }
      if (shortfall.memory_bytes > 0) {
        detail += " memory " + quantity::format_bytes(shortfall.memory_bytes);
      }
      record.decision.reasons.push_back({error.service(), "Shortfall", detail});
    }
    registry_->put(record);
    throw;
  }

  auto reject = [&](const std::string& service, const std::string& code, const std::string& detail,
                    const std::vector<admission::HydratedPackage>& drafts) -> registry::DeploymentRecord {
    for (const admission::HydratedPackage& draft : drafts) {
      try {
        store_->delete_revision(draft.revision.repo, draft.revision.name, draft.revision.revision);
      } catch (const CaminoError&) {
      }
    }
    record.phase = registry::Phase::Rejected;
    record.decision.approved = false;
    record.decision.reasons.push_back({service, code, detail});
    registry_->put(record);
    return record;
  };

  // Network planning before hydration: mesh-proxy flags bind into the
  // service manifests.
  intent::EndpointCatalog endpoint_catalog;
  for (const store::CatalogEntry& entry : store_->catalog()) {
    endpoint_catalog.endpoints[entry.package] = entry.endpoints;
  }
  std::vector<admission::HydratedPackage> hydrated;
  try {
    record.network = intent::derive_network_intent(parsed, record.placement, endpoint_catalog);
    const std::map<std::string, mesh::MeshConfig> mesh_plan =
        mesh::plan_mesh(record.network, record.placement, config_.trusted_domains, config_.mesh_options);
    for (const auto& [edge_id, config] : mesh_plan) {
      record.mesh_plans[edge_id] = mesh::to_json_text(config);
    }
    for (const mesh::ProxyInjection& injection : mesh::proxy_injections(record.network)) {
      record.proxy_injections[injection.service] = injection.enabled;
    }
    for (const intent::NetworkService& service : record.network.services) {
      for (const intent::Link& link : service.links_to) {
        switch (link.type) {
          case intent::LinkType::IntraEdge: ++record.links_intra; break;
          case intent::LinkType::InterEdge: ++record.links_inter; break;
          case intent::LinkType::CrossDomain: ++record.links_cross; break;
        }
      }
    }
    // Local pairs appear once per endpoint; count each pair once.
    record.links_intra /= 2;
    record.links_inter /= 2;

    // Hydrate service packages, deployment order.
    for (const std::string& service : order) {
      const intent::ServiceSpec* spec = parsed.service(service);
      const std::string& edge_id = record.placement.at(service);
      store::HydrationRequest request;
      request.blueprint_repo = config_.blueprint_repo;
      request.blueprint_package = service;
      request.blueprint_revision = spec->version;
      request.descriptor = requirements.at(service);
      request.target_repo = edge_repos_.at(edge_id);
      request.target_package = parsed.deployment_id + "." + service;
      request.deployment_id = parsed.deployment_id;
      request.service = service;

      // Bind only the pipeline parameters the blueprint declares.
      const store::PackageRevision blueprint =
          store_->get_revision(config_.blueprint_repo, service, spec->version);
      auto bind_if_declared = [&](const std::string& param, manifest::ScalarValue value) {
        if (blueprint.setters.count(param) > 0) request.extra_bindings[param] = std::move(value);
      };
      bind_if_declared("namespace", record.ns);
      bind_if_declared("workload-name", service);
      bind_if_declared("mesh-proxy", record.proxy_injections.count(service) > 0 &&
                                         record.proxy_injections.at(service));

      store::PackageRevision revision = store_->hydrate(request);
      registry::RevisionRef ref{revision.repo, revision.name, revision.revision, service, edge_id,
                                false};
      record.service_revisions.push_back(ref);
      hydrated.push_back(admission::HydratedPackage{std::move(revision), service, edge_id, false});
    }

    // One network package per edge with mesh objects.
    mesh::NetworkPackageSpec package_spec;
    package_spec.deployment_id = parsed.deployment_id;
    package_spec.ns = record.ns;
    package_spec.blueprint_repo = config_.blueprint_repo;
    package_spec.target_repos = edge_repos_;
    for (store::PackageRevision& revision :
         mesh::hydrate_network_packages(mesh_plan, *store_, package_spec)) {
      const std::string edge_id = store_->repository(revision.repo).owner_edge;
      record.network_revisions.push_back(
          registry::RevisionRef{revision.repo, revision.name, revision.revision, "mesh", edge_id, true});
      hydrated.push_back(admission::HydratedPackage{std::move(revision), "mesh", edge_id, true});
    }
  } catch (const CaminoError& error) {
    return reject("", std::string(to_string(error.code())), error.what(), hydrated);
  }

  registry_->put(record);  // Accepted

  registry::AdmissionDecision decision;
  try {
    admission::AdmitOptions options;
    options.stage_only_first = config_.sequence_on_readiness;
    decision = admission_->admit(parsed, order, record.placement, requirements, hydrated,
                                 edge_views(), options);
  } catch (const CaminoError&) {
    record.phase = registry::Phase::Failed;
    registry_->put(record);
    throw;
  }

  record.decision = decision;
  if (!decision.approved) {
    record.phase = registry::Phase::Rejected;
    registry_->put(record);
    return record;
  }
  record.published_services = config_.sequence_on_readiness ? 1 : order.size();
  record.phase = registry::Phase::Deploying;
  registry_->put(record);
  return record;
}

registry::DeploymentRecord Engine::terminate(const std::string& deployment_id) {
  registry::DeploymentRecord record = registry_->get(deployment_id);
  if (registry::is_terminal(record.phase) || record.phase == registry::Phase::Terminating) {
    return record;
  }

  const intent::TerminationIntent termination{deployment_id, record.intent.domain_name};
  const admission::TerminationCheck check =
      admission_->authorize_termination(termination, registry_->all());
  if (!check.approved) {
    throw CaminoError(Errc::TerminationConflict, check.detail);
  }
  admission_->delete_deployment_revisions(record);
  return registry_->set_phase(deployment_id, registry::Phase::Terminating);
}

void Engine::refresh_phases(bool publish_staged) {
  std::lock_guard lock(phase_mutex_);
  for (registry::DeploymentRecord record : registry_->all()) {
    if (record.phase == registry::Phase::Deploying) {
      // Staged publication when sequencing on readiness; only tick-driven so
      // that status reads stay side-effect free.
      if (record.published_services > 0 && record.published_services < record.order.size()) {
        if (!publish_staged) continue;
        const registry::RevisionRef& previous =
            record.service_revisions[record.published_services - 1];
        edgesim::EdgeSim* previous_edge = edge(previous.edge);
        const auto workload = previous_edge == nullptr
                                  ? std::nullopt
                                  : previous_edge->find_workload(record.deployment_id + "/" +
                                                                 previous.package + "@" +
                                                                 previous.revision);
        if (workload && workload->state == edgesim::WorkloadState::Running) {
          const registry::RevisionRef& next = record.service_revisions[record.published_services];
          store_->publish(next.repo, next.package, next.revision);
          ++record.published_services;
          if (record.published_services == record.order.size()) {
            for (const registry::RevisionRef& ref : record.network_revisions) {
              store_->publish(ref.repo, ref.package, ref.revision);
            }
          }
          registry_->put(record);
        }
        continue;
      }
      bool all_running = !record.service_revisions.empty();
      for (const registry::RevisionRef& ref : record.service_revisions) {
        edgesim::EdgeSim* target = edge(ref.edge);
        const auto workload =
            target == nullptr
                ? std::nullopt
                : target->find_workload(record.deployment_id + "/" + ref.package + "@" + ref.revision);
        if (!workload || workload->state != edgesim::WorkloadState::Running) {
          all_running = false;
          break;
        }
      }
      if (all_running) registry_->set_phase(record.deployment_id, registry::Phase::Running);
    } else if (record.phase == registry::Phase::Terminating) {
      bool all_gone = true;
      for (const registry::RevisionRef& ref : record.service_revisions) {
        edgesim::EdgeSim* target = edge(ref.edge);
        if (target != nullptr && target->find_workload(record.deployment_id + "/" + ref.package +
                                                       "@" + ref.revision)) {
          all_gone = false;
          break;
        }
      }
      for (const registry::RevisionRef& ref : record.network_revisions) {
        edgesim::EdgeSim* target = edge(ref.edge);
        if (target != nullptr && target->has_config_package(ref.package)) {
          all_gone = false;
          break;
        }
      }
      if (all_gone) {
        registry_->set_phase(record.deployment_id, registry::Phase::Terminated);
        ledger_.release(record.deployment_id);
      }
    }
  }
}

registry::DeploymentRecord Engine::status(const std::string& deployment_id) {
  refresh_phases(/*publish_staged=*/false);
  return registry_->get(deployment_id);
}

std::vector<registry::DeploymentRecord> Engine::deployments() {
  refresh_phases(/*publish_staged=*/false);
  return registry_->all();
}

std::string Engine::describe(const std::string& deployment_id) {
  const registry::DeploymentRecord record = status(deployment_id);
  ordered_json doc = ordered_json::parse(registry::to_json_text(record));
  ordered_json states = ordered_json::object();
  for (const registry::RevisionRef& ref : record.service_revisions) {
    edgesim::EdgeSim* target = edge(ref.edge);
    const auto workload =
        target == nullptr
            ? std::nullopt
            : target->find_workload(record.deployment_id + "/" + ref.package + "@" + ref.revision);
    ordered_json state;
    state["edge"] = ref.edge;
    state["revision"] = ref.revision;
    state["state"] = workload ? edgesim::to_string(workload->state)
                              : (record.phase == registry::Phase::Deploying &&
                                         record.published_services <= record.order.size()
                                     ? "Pending"
                                     : "Removed");
    states[ref.service] = std::move(state);
  }
  doc["service_states"] = std::move(states);
  return doc.dump(2);
}

CatalogReport Engine::catalog() const {
  CatalogReport report;
  report.entries = store_->catalog();
  const edgesim::Resources reserved = ledger_.total();
  report.reserved_cpu_millicores = reserved.cpu_millicores;
  report.reserved_memory_bytes = reserved.memory_bytes;
  return report;
}

std::vector<monitor::QueryResult> Engine::metrics(monitor::MetricQuery query, Role role) const {
  if (role != Role::Admin) query.scope = monitor::Scope::External;
  return monitoring_->query(query);
}

HealthReport Engine::health() const {
  HealthReport report;
  report.store_ok = std::filesystem::exists(store_->root());
  report.monitoring_ok = true;
  for (const auto& edge : edges_) {
    HealthReport::EdgeHealth health;
    health.edge_id = edge->id();
    health.tick = edge->tick();
    health.last_reconcile_tick = edge->last_reconcile_tick();
    const std::int64_t interval = edge->spec().reconcile_interval;
    health.ok = health.tick < interval ||
                (health.last_reconcile_tick >= 0 &&
                 health.tick - health.last_reconcile_tick <= 2 * interval);
    report.edges.push_back(health);
    report.ok = report.ok && health.ok;
  }
  report.ok = report.ok && report.store_ok && report.monitoring_ok;
  return report;
}

std::string Engine::resolve_domain(const std::string& name) const {
  return mesh::resolve_domain(name, config_.trusted_domains, std::nullopt);
}

void Engine::advance(int ticks) {
  std::lock_guard lock(tick_mutex_);
  for (int step = 0; step < ticks; ++step) {
    for (const auto& edge : edges_) edge->advance(1);
    refresh_phases(/*publish_staged=*/true);
  }
}

void Engine::start_ticker() {
  if (ticking_.exchange(true)) return;
  ticker_ = std::thread([this] {
    while (ticking_.load()) {
      std::this_thread::sleep_for(std::chrono::milliseconds(
          config_.auto_tick_ms > 0 ? config_.auto_tick_ms : 25));
      if (!ticking_.load()) break;
      advance(1);
    }
  });
}

void Engine::stop_ticker() {
  if (!ticking_.exchange(false)) return;
  if (ticker_.joinable()) ticker_.join();
}

}  // namespace camino::engine
