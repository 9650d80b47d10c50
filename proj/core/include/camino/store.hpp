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
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "camino/intent.hpp"
#include "camino/manifest.hpp"

namespace camino::store {

enum class RepoKind { Blueprint, Deployment };
enum class RevisionState { Draft, Proposed, Published };

const char* to_string(RepoKind kind);
const char* to_string(RevisionState state);

struct RepositoryInfo {
  std::string id;
  RepoKind kind{RepoKind::Blueprint};
  std::string owner_edge;  // deployment repositories only

  bool operator==(const RepositoryInfo&) const = default;
};

struct UpstreamRef {
  std::string repo;
  std::string package;
  std::string revision;

  bool operator==(const UpstreamRef&) const = default;
};

struct PackageRevision {
  std::string repo;
  std::string name;
  std::string revision;  // "v<n>", assigned by the store
  RevisionState state{RevisionState::Draft};
  std::vector<manifest::Document> manifests;
  std::map<std::string, std::vector<manifest::SetterTarget>> setters;
  std::string content_digest;

  // Hydration provenance and deployment metadata.
  std::optional<UpstreamRef> upstream;
  std::string deployment_id;
  std::string service;

  bool operator==(const PackageRevision&) const = default;
};

struct HydrationRequest {
  std::string blueprint_repo;
  std::string blueprint_package;
  std::string blueprint_revision;
  std::optional<intent::PackageDescriptor> descriptor;
  std::map<std::string, manifest::ScalarValue> extra_bindings;
  std::string target_repo;
  std::string target_package;
  std::string deployment_id;
  std::string service;
};

struct CatalogEntry {
  std::string package;
  std::vector<std::string> revisions;  // published labels, ascending
  std::optional<std::string> cpu_request;
  std::optional<std::string> memory_request;
  std::vector<intent::Endpoint> endpoints;
};

// Versioned Configuration-as-Data store. Repositories hold packages, each a
// numbered list of revisions; Published revisions are immutable. State is
// written through to disk on every mutation and reloaded on construction:
//   <root>/<repo>/repo.json
//   <root>/<repo>/<package>/<revision>/manifest-<k>.cmf
//   <root>/<repo>/<package>/<revision>/meta.json
//
// Mutations take an exclusive lock, reads a shared lock; readers only ever
// observe committed revisions.
class PackageStore {
 public:
  explicit PackageStore(std::filesystem::path root);

  RepositoryInfo register_repository(const std::string& id, RepoKind kind,
                                     const std::string& owner_edge = "");
  bool has_repository(const std::string& id) const;
  RepositoryInfo repository(const std::string& id) const;
  std::vector<RepositoryInfo> repositories() const;

  struct RevisionMeta {
    std::optional<UpstreamRef> upstream;
    std::string deployment_id;
    std::string service;
  };

  // Label must equal the next number in the package's sequence (v1, v2, ...).
  PackageRevision create_revision(const std::string& repo, const std::string& package,
                                  const std::string& label,
                                  std::vector<manifest::Document> manifests,
                                  const RevisionMeta& meta = {});

  PackageRevision get_revision(const std::string& repo, const std::string& package,
                               const std::string& label) const;
  std::vector<PackageRevision> revisions(const std::string& repo) const;
  // Latest Published revision of every package in the repository; this is
  // the desired state a reconciler converges to.
  std::vector<PackageRevision> published_latest(const std::string& repo) const;

  PackageRevision propose(const std::string& repo, const std::string& package,
                          const std::string& label);
  PackageRevision publish(const std::string& repo, const std::string& package,
                          const std::string& label);
  void delete_revision(const std::string& repo, const std::string& package,
                       const std::string& label);

  std::vector<CatalogEntry> catalog() const;

  // Digest over the Published content of a repository; Draft and Proposed
  // revisions do not contribute.
  std::string repository_digest(const std::string& repo) const;

  PackageRevision hydrate(const HydrationRequest& request);

  // Test hook: makes publish() fail with StorageError when it returns true.
  using PublishFault = std::function<bool(const std::string& repo, const std::string& package,
                                          const std::string& label)>;
  void set_publish_fault(PublishFault fault);

  const std::filesystem::path& root() const { return root_; }

  static std::string revision_digest(const std::vector<manifest::Document>& manifests);

 private:
  struct Repository {
    RepositoryInfo info;
    std::map<std::string, std::vector<PackageRevision>> packages;
  };

  const Repository& repo_or_throw(const std::string& id) const;
  Repository& repo_or_throw(const std::string& id);
  static PackageRevision* find_revision(Repository& repo, const std::string& package,
                                        const std::string& label);
  void load();
  void persist_revision(const PackageRevision& revision) const;
  std::filesystem::path revision_dir(const PackageRevision& revision) const;

  std::filesystem::path root_;
  std::map<std::string, Repository> repos_;
  PublishFault publish_fault_;
  mutable std::shared_mutex mutex_;
};

}  // namespace camino::store
