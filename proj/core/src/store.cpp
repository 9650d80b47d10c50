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

#include "camino/store.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "camino/digest.hpp"
#include "camino/errors.hpp"

namespace camino::store {
namespace {

using nlohmann::json;

bool is_safe_id(const std::string& id) {
  if (id.empty() || id == "." || id == "..") return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
  });
}

int revision_number(const std::string& label) {
  if (label.size() < 2 || label[0] != 'v') return -1;
  int value = 0;
  for (std::size_t i = 1; i < label.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(label[i]))) return -1;
    value = value * 10 + (label[i] - '0');
  }
  return value > 0 ? value : -1;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CaminoError(Errc::StorageError, "cannot write " + path.string());
  out << content;
  if (!out) throw CaminoError(Errc::StorageError, "write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CaminoError(Errc::StorageError, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RevisionState state_from_string(const std::string& text) {
  if (text == "Draft") return RevisionState::Draft;
  if (text == "Proposed") return RevisionState::Proposed;
  if (text == "Published") return RevisionState::Published;
  throw CaminoError(Errc::StorageError, "unknown revision state '" + text + "'");
}

const manifest::Node* manifest_of_kind(const std::vector<manifest::Document>& docs,
                                       std::string_view kind) {
  for (const manifest::Document& doc : docs) {
    const manifest::Node* node = doc.find("kind");
    if (node != nullptr && node->is_scalar() &&
        std::holds_alternative<std::string>(node->scalar()) &&
        std::get<std::string>(node->scalar()) == kind) {
      return &doc;
    }
  }
  return nullptr;
}

}  // namespace

const char* to_string(RepoKind kind) {
  return kind == RepoKind::Blueprint ? "blueprint" : "deployment";
}

const char* to_string(RevisionState state) {
  switch (state) {
    case RevisionState::Draft: return "Draft";
    case RevisionState::Proposed: return "Proposed";
    case RevisionState::Published: return "Published";
  }
  return "Draft";
}

std::string PackageStore::revision_digest(const std::vector<manifest::Document>& manifests) {
  std::string canonical;
  for (const manifest::Document& doc : manifests) {
    canonical += manifest::canonical(doc);
    canonical += "---\n";
  }
  return sha256_hex(canonical);
}

PackageStore::PackageStore(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
  load();
}

void PackageStore::load() {
  for (const auto& repo_entry : std::filesystem::directory_iterator(root_)) {
    if (!repo_entry.is_directory()) continue;
    const std::filesystem::path repo_meta = repo_entry.path() / "repo.json";
    if (!std::filesystem::exists(repo_meta)) continue;
    const json meta = json::parse(read_file(repo_meta));
    Repository repo;
    repo.info.id = meta.at("id").get<std::string>();
    repo.info.kind = meta.at("kind").get<std::string>() == "deployment" ? RepoKind::Deployment
                                                                        : RepoKind::Blueprint;
    if (meta.contains("owner_edge")) repo.info.owner_edge = meta.at("owner_edge").get<std::string>();

    for (const auto& package_entry : std::filesystem::directory_iterator(repo_entry.path())) {
      if (!package_entry.is_directory()) continue;
      std::vector<PackageRevision> revisions;
      for (const auto& revision_entry : std::filesystem::directory_iterator(package_entry.path())) {
        if (!revision_entry.is_directory()) continue;
        const std::filesystem::path rev_meta_path = revision_entry.path() / "meta.json";
        if (!std::filesystem::exists(rev_meta_path)) continue;
        const json rev_meta = json::parse(read_file(rev_meta_path));
        PackageRevision revision;
        revision.repo = repo.info.id;
        revision.name = rev_meta.at("name").get<std::string>();
        revision.revision = rev_meta.at("revision").get<std::string>();
        revision.state = state_from_string(rev_meta.at("state").get<std::string>());
        if (rev_meta.contains("upstream")) {
          const auto& up = rev_meta.at("upstream");
          revision.upstream = UpstreamRef{up.at("repo").get<std::string>(),
                                          up.at("package").get<std::string>(),
                                          up.at("revision").get<std::string>()};
        }
        if (rev_meta.contains("deployment_id")) {
          revision.deployment_id = rev_meta.at("deployment_id").get<std::string>();
        }
        if (rev_meta.contains("service")) revision.service = rev_meta.at("service").get<std::string>();

        const auto count = rev_meta.at("manifest_count").get<std::size_t>();
        for (std::size_t k = 0; k < count; ++k) {
          const std::filesystem::path file =
              revision_entry.path() / ("manifest-" + std::to_string(k) + ".cmf");
          revision.manifests.push_back(manifest::parse(read_file(file)));
        }
        revision.setters = manifest::collect_setters(revision.manifests);
        revision.content_digest = revision_digest(revision.manifests);
        const std::string recorded = rev_meta.at("digest").get<std::string>();
        if (recorded != revision.content_digest) {
          throw CaminoError(Errc::StorageError, "digest mismatch for " + repo.info.id + "/" +
                                                    revision.name + "/" + revision.revision);
        }
        revisions.push_back(std::move(revision));
      }
      if (revisions.empty()) continue;
      std::sort(revisions.begin(), revisions.end(), [](const PackageRevision& a, const PackageRevision& b) {
        return revision_number(a.revision) < revision_number(b.revision);
      });
      repo.packages[revisions.front().name] = std::move(revisions);
    }
    repos_[repo.info.id] = std::move(repo);
  }
}

std::filesystem::path PackageStore::revision_dir(const PackageRevision& revision) const {
  return root_ / revision.repo / revision.name / revision.revision;
}

void PackageStore::persist_revision(const PackageRevision& revision) const {
  const std::filesystem::path dir = revision_dir(revision);
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < revision.manifests.size(); ++k) {
    write_file(dir / ("manifest-" + std::to_string(k) + ".cmf"),
               manifest::serialize(revision.manifests[k]));
  }
  json meta;
  meta["name"] = revision.name;
  meta["revision"] = revision.revision;
  meta["state"] = to_string(revision.state);
  meta["digest"] = revision.content_digest;
  meta["manifest_count"] = revision.manifests.size();
  json setters = json::object();
  for (const auto& [param, targets] : revision.setters) {
    json list = json::array();
    for (const manifest::SetterTarget& target : targets) {
      list.push_back({{"doc", target.doc_index}, {"path", target.path}});
    }
    setters[param] = std::move(list);
  }
  meta["setters"] = std::move(setters);
  if (revision.upstream) {
    meta["upstream"] = {{"repo", revision.upstream->repo},
                        {"package", revision.upstream->package},
                        {"revision", revision.upstream->revision}};
  }
  if (!revision.deployment_id.empty()) meta["deployment_id"] = revision.deployment_id;
  if (!revision.service.empty()) meta["service"] = revision.service;
  write_file(dir / "meta.json", meta.dump(2));
}

const PackageStore::Repository& PackageStore::repo_or_throw(const std::string& id) const {
  const auto it = repos_.find(id);
  if (it == repos_.end()) throw CaminoError(Errc::NotFound, "unknown repository '" + id + "'");
  return it->second;
}

PackageStore::Repository& PackageStore::repo_or_throw(const std::string& id) {
  const auto it = repos_.find(id);
  if (it == repos_.end()) throw CaminoError(Errc::NotFound, "unknown repository '" + id + "'");
  return it->second;
}

PackageRevision* PackageStore::find_revision(Repository& repo, const std::string& package,
                                             const std::string& label) {
  const auto it = repo.packages.find(package);
  if (it == repo.packages.end()) return nullptr;
  for (PackageRevision& revision : it->second) {
    if (revision.revision == label) return &revision;
  }
  return nullptr;
}

RepositoryInfo PackageStore::register_repository(const std::string& id, RepoKind kind,
                                                 const std::string& owner_edge) {
  std::unique_lock lock(mutex_);
  if (!is_safe_id(id)) throw CaminoError(Errc::SchemaError, "bad repository id '" + id + "'");
  if (repos_.count(id) > 0) throw CaminoError(Errc::DuplicateId, "repository '" + id + "' exists");
  if (kind == RepoKind::Deployment && owner_edge.empty()) {
    throw CaminoError(Errc::MissingOwnerEdge, "deployment repository '" + id + "' needs an owner edge");
  }
  if (kind == RepoKind::Blueprint && !owner_edge.empty()) {
    throw CaminoError(Errc::SchemaError, "blueprint repository '" + id + "' cannot have an owner edge");
  }
  Repository repo;
  repo.info = RepositoryInfo{id, kind, owner_edge};

  std::filesystem::create_directories(root_ / id);
  json meta;
  meta["id"] = id;
  meta["kind"] = to_string(kind);
  if (!owner_edge.empty()) meta["owner_edge"] = owner_edge;
  write_file(root_ / id / "repo.json", meta.dump(2));

  const RepositoryInfo info = repo.info;
  repos_[id] = std::move(repo);
  return info;
}

bool PackageStore::has_repository(const std::string& id) const {
  std::shared_lock lock(mutex_);
  return repos_.count(id) > 0;
}

RepositoryInfo PackageStore::repository(const std::string& id) const {
  std::shared_lock lock(mutex_);
  return repo_or_throw(id).info;
}

std::vector<RepositoryInfo> PackageStore::repositories() const {
  std::shared_lock lock(mutex_);
  std::vector<RepositoryInfo> out;
  out.reserve(repos_.size());
  for (const auto& [id, repo] : repos_) {
    (void)id;
    out.push_back(repo.info);
  }
  return out;
}

PackageRevision PackageStore::create_revision(const std::string& repo_id, const std::string& package,
                                              const std::string& label,
                                              std::vector<manifest::Document> manifests,
                                              const RevisionMeta& meta) {
  std::unique_lock lock(mutex_);
  Repository& repo = repo_or_throw(repo_id);
  if (!is_safe_id(package)) throw CaminoError(Errc::SchemaError, "bad package name '" + package + "'");
  if (manifests.empty()) throw CaminoError(Errc::SchemaError, "a revision needs at least one manifest");

  int max_number = 0;
  const auto it = repo.packages.find(package);
  if (it != repo.packages.end()) {
    for (const PackageRevision& revision : it->second) {
      max_number = std::max(max_number, revision_number(revision.revision));
    }
  }
  const std::string expected = "v" + std::to_string(max_number + 1);
  if (label != expected) {
    throw CaminoError(Errc::SchemaError,
                      "revision label must be " + expected + " (got '" + label + "')");
  }

  PackageRevision revision;
  revision.repo = repo_id;
  revision.name = package;
  revision.revision = label;
  revision.state = RevisionState::Draft;
  revision.manifests = std::move(manifests);
  revision.setters = manifest::collect_setters(revision.manifests);
  revision.content_digest = revision_digest(revision.manifests);
  revision.upstream = meta.upstream;
  revision.deployment_id = meta.deployment_id;
  revision.service = meta.service;

  persist_revision(revision);
  repo.packages[package].push_back(revision);
  return revision;
}

PackageRevision PackageStore::get_revision(const std::string& repo_id, const std::string& package,
                                           const std::string& label) const {
  std::shared_lock lock(mutex_);
  const Repository& repo = repo_or_throw(repo_id);
  const auto it = repo.packages.find(package);
  if (it != repo.packages.end()) {
    for (const PackageRevision& revision : it->second) {
      if (revision.revision == label) return revision;
    }
  }
  throw CaminoError(Errc::UnknownRevision, repo_id + "/" + package + "/" + label + " not found");
}

std::vector<PackageRevision> PackageStore::revisions(const std::string& repo_id) const {
  std::shared_lock lock(mutex_);
  const Repository& repo = repo_or_throw(repo_id);
  std::vector<PackageRevision> out;
  for (const auto& [name, revisions] : repo.packages) {
    (void)name;
    out.insert(out.end(), revisions.begin(), revisions.end());
  }
  return out;
}

std::vector<PackageRevision> PackageStore::published_latest(const std::string& repo_id) const {
  std::shared_lock lock(mutex_);
  const Repository& repo = repo_or_throw(repo_id);
  std::vector<PackageRevision> out;
  for (const auto& [name, revisions] : repo.packages) {
    (void)name;
    const PackageRevision* latest = nullptr;
    for (const PackageRevision& revision : revisions) {
      if (revision.state != RevisionState::Published) continue;
      if (latest == nullptr ||
          revision_number(revision.revision) > revision_number(latest->revision)) {
        latest = &revision;
      }
    }
    if (latest != nullptr) out.push_back(*latest);
  }
  return out;
}

PackageRevision PackageStore::propose(const std::string& repo_id, const std::string& package,
                                      const std::string& label) {
  std::unique_lock lock(mutex_);
  Repository& repo = repo_or_throw(repo_id);
  PackageRevision* revision = find_revision(repo, package, label);
  if (revision == nullptr) {
    throw CaminoError(Errc::UnknownRevision, repo_id + "/" + package + "/" + label + " not found");
  }
  if (revision->state != RevisionState::Draft) {
    throw CaminoError(Errc::ImmutabilityViolation,
                      "only Draft revisions can be proposed (" + package + "/" + label + ")");
  }
  revision->state = RevisionState::Proposed;
  persist_revision(*revision);
  return *revision;
}

PackageRevision PackageStore::publish(const std::string& repo_id, const std::string& package,
                                      const std::string& label) {
  std::unique_lock lock(mutex_);
  Repository& repo = repo_or_throw(repo_id);
  PackageRevision* revision = find_revision(repo, package, label);
  if (revision == nullptr) {
    throw CaminoError(Errc::UnknownRevision, repo_id + "/" + package + "/" + label + " not found");
  }
  if (revision->state == RevisionState::Published) {
    throw CaminoError(Errc::ImmutabilityViolation, package + "/" + label + " is already Published");
  }
  if (publish_fault_ && publish_fault_(repo_id, package, label)) {
    throw CaminoError(Errc::StorageError, "injected publish fault for " + package + "/" + label);
  }
  revision->state = RevisionState::Published;
  persist_revision(*revision);
  return *revision;
}

void PackageStore::delete_revision(const std::string& repo_id, const std::string& package,
                                   const std::string& label) {
  std::unique_lock lock(mutex_);
  Repository& repo = repo_or_throw(repo_id);
  PackageRevision* revision = find_revision(repo, package, label);
  if (revision == nullptr) {
    throw CaminoError(Errc::UnknownRevision, repo_id + "/" + package + "/" + label + " not found");
  }

  // Published blueprints stay immutable while hydrated packages reference them.
  if (repo.info.kind == RepoKind::Blueprint && revision->state == RevisionState::Published) {
    for (const auto& [other_id, other] : repos_) {
      (void)other_id;
      for (const auto& [pkg, revisions] : other.packages) {
        (void)pkg;
        for (const PackageRevision& candidate : revisions) {
          if (candidate.upstream && candidate.upstream->repo == repo_id &&
              candidate.upstream->package == package && candidate.upstream->revision == label) {
            throw CaminoError(Errc::ImmutabilityViolation,
                              repo_id + "/" + package + "/" + label + " is referenced by " +
                                  other.info.id + "/" + candidate.name + "/" + candidate.revision);
          }
        }
      }
    }
  }

  auto& revisions = repo.packages.at(package);
  revisions.erase(std::remove_if(revisions.begin(), revisions.end(),
                                 [&](const PackageRevision& r) { return r.revision == label; }),
                  revisions.end());
  std::error_code ec;
  std::filesystem::remove_all(root_ / repo_id / package / label, ec);
  if (revisions.empty()) {
    repo.packages.erase(package);
    std::filesystem::remove_all(root_ / repo_id / package, ec);
  }
}

std::vector<CatalogEntry> PackageStore::catalog() const {
  std::shared_lock lock(mutex_);
  std::vector<CatalogEntry> out;
  for (const auto& [repo_id, repo] : repos_) {
    (void)repo_id;
    if (repo.info.kind != RepoKind::Blueprint) continue;
    for (const auto& [package, revisions] : repo.packages) {
      CatalogEntry entry;
      entry.package = package;
      const PackageRevision* latest = nullptr;
      for (const PackageRevision& revision : revisions) {
        if (revision.state != RevisionState::Published) continue;
        entry.revisions.push_back(revision.revision);
        if (latest == nullptr ||
            revision_number(revision.revision) > revision_number(latest->revision)) {
          latest = &revision;
        }
      }
      if (entry.revisions.empty()) continue;
      std::sort(entry.revisions.begin(), entry.revisions.end(),
                [](const std::string& a, const std::string& b) {
                  return revision_number(a) < revision_number(b);
                });
      const manifest::Node* deployment = manifest_of_kind(latest->manifests, "Deployment");
      if (deployment != nullptr) {
        if (const manifest::Node* cpu =
                manifest::find_path(*deployment, "spec.containers.0.resources.cpu");
            cpu != nullptr && cpu->is_scalar()) {
          entry.cpu_request = manifest::scalar_to_string(cpu->scalar());
        }
        if (const manifest::Node* memory =
                manifest::find_path(*deployment, "spec.containers.0.resources.memory");
            memory != nullptr && memory->is_scalar()) {
          entry.memory_request = manifest::scalar_to_string(memory->scalar());
        }
      }
      for (const manifest::Document& doc : latest->manifests) {
        const manifest::Node* kind = doc.find("kind");
        if (kind == nullptr || !kind->is_scalar() ||
            !std::holds_alternative<std::string>(kind->scalar()) ||
            std::get<std::string>(kind->scalar()) != "Service") {
          continue;
        }
        const manifest::Node* host = manifest::find_path(doc, "spec.host");
        const manifest::Node* port = manifest::find_path(doc, "spec.port");
        const manifest::Node* protocol = manifest::find_path(doc, "spec.protocol");
        if (host == nullptr || port == nullptr || protocol == nullptr) continue;
        if (!host->is_scalar() || !port->is_scalar() || !protocol->is_scalar()) continue;
        if (!std::holds_alternative<std::string>(host->scalar()) ||
            !std::holds_alternative<std::int64_t>(port->scalar()) ||
            !std::holds_alternative<std::string>(protocol->scalar())) {
          continue;
        }
        intent::Endpoint endpoint;
        endpoint.host = std::get<std::string>(host->scalar());
        endpoint.port = static_cast<int>(std::get<std::int64_t>(port->scalar()));
        endpoint.protocol = intent::protocol_from_string(std::get<std::string>(protocol->scalar()));
        entry.endpoints.push_back(std::move(endpoint));
      }
      out.push_back(std::move(entry));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const CatalogEntry& a, const CatalogEntry& b) { return a.package < b.package; });
  return out;
}

std::string PackageStore::repository_digest(const std::string& repo_id) const {
  std::shared_lock lock(mutex_);
  const Repository& repo = repo_or_throw(repo_id);
  std::string lines;
  for (const auto& [package, revisions] : repo.packages) {
    (void)package;
    for (const PackageRevision& revision : revisions) {
      if (revision.state != RevisionState::Published) continue;
      lines += revision.name + " " + revision.revision + " " + revision.content_digest + "\n";
    }
  }
  return sha256_hex(lines);
}

PackageRevision PackageStore::hydrate(const HydrationRequest& request) {
  std::unique_lock lock(mutex_);
  Repository& blueprint_repo = repo_or_throw(request.blueprint_repo);
  PackageRevision* blueprint =
      find_revision(blueprint_repo, request.blueprint_package, request.blueprint_revision);
  if (blueprint == nullptr) {
    throw CaminoError(Errc::UnknownRevision, request.blueprint_repo + "/" + request.blueprint_package +
                                                 "/" + request.blueprint_revision + " not found");
  }
  if (blueprint->state != RevisionState::Published) {
    throw CaminoError(Errc::SemanticError,
                      "blueprint " + request.blueprint_package + "/" + request.blueprint_revision +
                          " is not Published");
  }
  Repository& target = repo_or_throw(request.target_repo);
  if (target.info.kind != RepoKind::Deployment) {
    throw CaminoError(Errc::SchemaError, "target repository '" + request.target_repo +
                                             "' is not a deployment repository");
  }

  // Implicit descriptor bindings apply where the blueprint is annotated;
  // extra bindings are strict and must all match an annotation.
  std::map<std::string, manifest::ScalarValue> bindings;
  if (request.descriptor) {
    const intent::PackageRequirement* requirement = nullptr;
    for (const intent::PackageRequirement& candidate : request.descriptor->requirements) {
      if (candidate.revision == request.blueprint_revision) {
        requirement = &candidate;
        break;
      }
    }
    if (requirement == nullptr) {
      throw CaminoError(Errc::SemanticError,
                        "descriptor '" + request.descriptor->name + "' has no requirement for " +
                            request.blueprint_revision);
    }
    bindings["qos"] = requirement->qos;
    bindings["container"] = requirement->resources.container;
    if (std::holds_alternative<std::int64_t>(requirement->resources.cpu_raw)) {
      bindings["cpu"] = std::get<std::int64_t>(requirement->resources.cpu_raw);
    } else {
      bindings["cpu"] = std::get<std::string>(requirement->resources.cpu_raw);
    }
    if (std::holds_alternative<std::int64_t>(requirement->resources.memory_raw)) {
      bindings["memory"] = std::get<std::int64_t>(requirement->resources.memory_raw);
    } else {
      bindings["memory"] = std::get<std::string>(requirement->resources.memory_raw);
    }
  }
  for (const auto& [param, value] : request.extra_bindings) bindings[param] = value;

  std::set<std::string> resolved;
  std::set<std::string> unresolved;
  std::vector<manifest::Document> hydrated;
  hydrated.reserve(blueprint->manifests.size());
  for (const manifest::Document& doc : blueprint->manifests) {
    hydrated.push_back(manifest::bind(doc, bindings, resolved, unresolved));
  }
  if (!unresolved.empty()) {
    std::string missing;
    for (const std::string& param : unresolved) {
      if (!missing.empty()) missing += ", ";
      missing += param;
    }
    throw CaminoError(Errc::UnresolvedSetter, missing);
  }
  for (const auto& [param, value] : request.extra_bindings) {
    (void)value;
    if (resolved.count(param) == 0) {
      throw CaminoError(Errc::UnknownParameter, "binding '" + param + "' matches no annotation");
    }
  }

  const std::string target_package =
      request.target_package.empty() ? request.blueprint_package : request.target_package;
  if (!is_safe_id(target_package)) {
    throw CaminoError(Errc::SchemaError, "bad package name '" + target_package + "'");
  }

  int max_number = 0;
  if (const auto it = target.packages.find(target_package); it != target.packages.end()) {
    for (const PackageRevision& revision : it->second) {
      max_number = std::max(max_number, revision_number(revision.revision));
    }
  }

  PackageRevision revision;
  revision.repo = request.target_repo;
  revision.name = target_package;
  revision.revision = "v" + std::to_string(max_number + 1);
  revision.state = RevisionState::Draft;
  revision.manifests = std::move(hydrated);
  revision.setters = manifest::collect_setters(revision.manifests);
  revision.content_digest = revision_digest(revision.manifests);
  revision.upstream = UpstreamRef{request.blueprint_repo, request.blueprint_package,
                                  request.blueprint_revision};
  revision.deployment_id = request.deployment_id;
  revision.service = request.service.empty() ? request.blueprint_package : request.service;

  persist_revision(revision);
  target.packages[target_package].push_back(revision);
  return revision;
}

void PackageStore::set_publish_fault(PublishFault fault) {
  std::unique_lock lock(mutex_);
  publish_fault_ = std::move(fault);
}

}  // namespace camino::store
