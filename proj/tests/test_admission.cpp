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

#include "camino/admission.hpp"
#include "camino/errors.hpp"
#include "helpers.hpp"

using namespace camino;
using test::TempDir;

namespace {

// Store + two edges + descriptors for a small two-service deployment.
struct Harness {
  TempDir dir{"admission"};
  store::PackageStore store{dir.path() / "store"};
  admission::ResourceLedger ledger;
  admission::AdmissionController controller{store, ledger};
  std::unique_ptr<edgesim::EdgeSim> edge1;
  std::unique_ptr<edgesim::EdgeSim> edge2;

  Harness() {
    store.register_repository("blueprints", store::RepoKind::Blueprint);
    store.register_repository("edge1-deploy", store::RepoKind::Deployment, "Edge1");
    store.register_repository("edge2-deploy", store::RepoKind::Deployment, "Edge2");
    edgesim::EdgeSpec spec1;
    spec1.id = "Edge1";
    spec1.capacity = {8000, 16LL << 30};
    spec1.capabilities = {"ingress-controller", "service-mesh", "east-west-gateway"};
    spec1.deployment_repo = "edge1-deploy";
    spec1.seed = 1;
    edgesim::EdgeSpec spec2 = spec1;
    spec2.id = "Edge2";
    spec2.capacity = {4000, 8LL << 30};
    spec2.capabilities = {"service-mesh"};
    spec2.deployment_repo = "edge2-deploy";
    edge1 = std::make_unique<edgesim::EdgeSim>(spec1);
    edge2 = std::make_unique<edgesim::EdgeSim>(spec2);
    edge1->attach_store(&store);
    edge2->attach_store(&store);
  }

  std::vector<const edgesim::EdgeSim*> edges() const { return {edge1.get(), edge2.get()}; }

  admission::HydratedPackage draft(const std::string& deployment, const std::string& service,
                                   const std::string& edge, int cpu_cores,
                                   const std::string& extra_kind = "") {
    std::string text = "kind: Deployment\nmetadata:\n  name: " + service +
                       "\n  namespace: ns-" + deployment +
                       "\nspec:\n  containers:\n    - name: app\n      resources:\n        cpu: " +
                       std::to_string(cpu_cores) + "\n        memory: 1Gi\n";
    std::vector<manifest::Document> manifests = {manifest::parse(text)};
    if (!extra_kind.empty()) {
      manifests.push_back(manifest::parse("kind: " + extra_kind + "\nspec:\n  service: " + service +
                                          "\n  port: 80\n"));
    }
    const std::string repo = edge == "Edge1" ? "edge1-deploy" : "edge2-deploy";
    const std::string package = deployment + "." + service;
    store::PackageStore::RevisionMeta meta;
    meta.deployment_id = deployment;
    meta.service = service;
    int next = 1;
    for (const auto& revision : store.revisions(repo)) {
      if (revision.name == package) next = std::max(next, std::stoi(revision.revision.substr(1)) + 1);
    }
    const auto revision =
        store.create_revision(repo, package, "v" + std::to_string(next), manifests, meta);
    return admission::HydratedPackage{revision, service, edge, false};
  }

  static intent::PackageDescriptor descriptor(const std::string& name, int cpu_cores) {
    intent::PackageDescriptor out;
    out.name = name;
    intent::PackageRequirement req;
    req.qos = "default";
    req.revision = "v1";
    req.resources.container = "c";
    req.resources.cpu_raw = std::int64_t{cpu_cores};
    req.resources.cpu_millicores = cpu_cores * 1000;
    req.resources.memory_raw = std::string("1Gi");
    req.resources.memory_bytes = 1LL << 30;
    out.requirements.push_back(std::move(req));
    return out;
  }
};

}  // namespace

TEST_CASE("validation findings") {
  Harness h;

  SUBCASE("clean package on a capable edge has no findings") {
    const auto package = h.draft("d1", "svc", "Edge1", 1, "IngressRule");
    CHECK(h.controller.validate_packages({package}, h.edges()).empty());
  }

  SUBCASE("missing capability is reported") {
    const auto package = h.draft("d1", "svc", "Edge2", 1, "IngressRule");
    const auto findings = h.controller.validate_packages({package}, h.edges());
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].code == "MissingCapability");
    CHECK(findings[0].detail == "ingress-controller");
    CHECK(findings[0].service == "svc");
  }

  SUBCASE("leftover annotations are reported") {
    store::PackageStore::RevisionMeta meta;
    meta.deployment_id = "d1";
    meta.service = "svc";
    const auto revision = h.store.create_revision(
        "edge1-deploy", "d1.svc", "v1",
        {manifest::parse("kind: Service\nspec:\n  host: a  # set: host\n  port: 80\n"
                         "  protocol: HTTP\n")},
        meta);
    const auto findings = h.controller.validate_packages(
        {admission::HydratedPackage{revision, "svc", "Edge1", false}}, h.edges());
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].code == "UnresolvedSetter");
    CHECK(findings[0].detail == "host");
  }
}

TEST_CASE("resource checks against live state") {
  Harness h;
  const auto intent = test::make_intent("d1", {test::make_service("a"), test::make_service("b")});
  const std::map<std::string, intent::PackageDescriptor> requirements = {
      {"a", Harness::descriptor("a", 4)}, {"b", Harness::descriptor("b", 4)}};

  SUBCASE("fitting plan yields no findings") {
    const intent::PlacementMap plan = {{"a", "Edge1"}, {"b", "Edge1"}};
    CHECK(h.controller.check_resources(intent, plan, requirements, h.edges()).empty());
  }

  SUBCASE("shortfall is the demand minus free") {
    const intent::PlacementMap plan = {{"a", "Edge2"}, {"b", "Edge2"}};  // 8 cores onto 4
    const auto findings = h.controller.check_resources(intent, plan, requirements, h.edges());
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].edge_id == "Edge2");
    CHECK(findings[0].resource == "cpu");
    CHECK(findings[0].shortfall == 4000);
    CHECK(findings[0].detail == "4000m");
  }

  SUBCASE("exactly-equal demand is admissible") {
    const auto exact = std::map<std::string, intent::PackageDescriptor>{
        {"a", Harness::descriptor("a", 2)}, {"b", Harness::descriptor("b", 2)}};
    const intent::PlacementMap plan = {{"a", "Edge2"}, {"b", "Edge2"}};  // 4 == 4
    CHECK(h.controller.check_resources(intent, plan, exact, h.edges()).empty());
  }
}

TEST_CASE("admission is whole-intent and atomic") {
  Harness h;
  const auto intent = test::make_intent("d1", {test::make_service("a"), test::make_service("b")});
  const std::vector<std::string> order = {"a", "b"};
  const intent::PlacementMap plan = {{"a", "Edge1"}, {"b", "Edge2"}};
  const std::map<std::string, intent::PackageDescriptor> requirements = {
      {"a", Harness::descriptor("a", 2)}, {"b", Harness::descriptor("b", 2)}};

  SUBCASE("approval publishes everything in order and reserves the ledger") {
    std::vector<admission::HydratedPackage> hydrated = {h.draft("d1", "a", "Edge1", 2),
                                                        h.draft("d1", "b", "Edge2", 2)};
    // Publication order spy: the fault hook sees every publish, fails none.
    std::vector<std::string> publish_order;
    h.store.set_publish_fault([&publish_order](const std::string&, const std::string& package,
                                               const std::string&) {
      publish_order.push_back(package);
      return false;
    });
    const auto decision =
        h.controller.admit(intent, order, plan, requirements, hydrated, h.edges());
    h.store.set_publish_fault(nullptr);
    CHECK(decision.approved);
    CHECK(decision.reasons.empty());
    CHECK(publish_order == std::vector<std::string>{"d1.a", "d1.b"});
    REQUIRE(decision.resource_plan.count("Edge1") == 1);
    CHECK(decision.resource_plan.at("Edge1")[0].service == "a");
    CHECK(h.store.get_revision("edge1-deploy", "d1.a", "v1").state ==
          store::RevisionState::Published);
    CHECK(h.store.get_revision("edge2-deploy", "d1.b", "v1").state ==
          store::RevisionState::Published);
    CHECK(h.ledger.reserved("Edge1").cpu_millicores == 2000);
    CHECK(h.ledger.reserved("Edge2").cpu_millicores == 2000);
  }

  SUBCASE("one bad package rejects the whole intent, naming that service") {
    std::vector<admission::HydratedPackage> hydrated = {
        h.draft("d1", "a", "Edge1", 2), h.draft("d1", "b", "Edge2", 2, "IngressRule")};
    const std::string digest1 = h.store.repository_digest("edge1-deploy");
    const std::string digest2 = h.store.repository_digest("edge2-deploy");
    const auto decision =
        h.controller.admit(intent, order, plan, requirements, hydrated, h.edges());
    CHECK_FALSE(decision.approved);
    REQUIRE(decision.reasons.size() == 1);
    CHECK(decision.reasons[0].service == "b");
    CHECK(decision.reasons[0].code == "MissingCapability");
    // Rejection purity: published content untouched, drafts removed.
    CHECK(h.store.repository_digest("edge1-deploy") == digest1);
    CHECK(h.store.repository_digest("edge2-deploy") == digest2);
    CHECK(h.store.revisions("edge1-deploy").empty());
    CHECK(h.store.revisions("edge2-deploy").empty());
    CHECK_FALSE(h.ledger.holds("d1"));
  }

  SUBCASE("publication faults roll back every revision") {
    std::vector<admission::HydratedPackage> hydrated = {h.draft("d1", "a", "Edge1", 2),
                                                        h.draft("d1", "b", "Edge2", 2)};
    h.store.set_publish_fault([](const std::string&, const std::string& package, const std::string&) {
      return package == "d1.b";
    });
    CHECK_THROWS_AS(h.controller.admit(intent, order, plan, requirements, hydrated, h.edges()),
                    CaminoError);
    h.store.set_publish_fault(nullptr);
    CHECK(h.store.revisions("edge1-deploy").empty());
    CHECK(h.store.revisions("edge2-deploy").empty());
    CHECK_FALSE(h.ledger.holds("d1"));
  }

  SUBCASE("ledger reservations from other deployments gate admission") {
    h.ledger.reserve("other", {{"Edge1", {7000, 1LL << 30}}});
    std::vector<admission::HydratedPackage> hydrated = {h.draft("d1", "a", "Edge1", 2),
                                                        h.draft("d1", "b", "Edge2", 2)};
    const auto decision =
        h.controller.admit(intent, order, plan, requirements, hydrated, h.edges());
    CHECK_FALSE(decision.approved);
    REQUIRE(decision.reasons.size() == 1);
    CHECK(decision.reasons[0].code == "Shortfall");
  }
}

TEST_CASE("termination authorization scans active dependencies") {
  Harness h;
  registry::DeploymentRecord record_a;
  record_a.deployment_id = "A";
  record_a.intent = test::make_intent("A", {test::make_service("a-service")});
  record_a.phase = registry::Phase::Running;

  registry::DeploymentRecord record_b;
  record_b.deployment_id = "B";
  record_b.intent = test::make_intent(
      "B", {test::make_service("b-service", "v1", {{"a-service", "Domain-X", ""}})});
  record_b.phase = registry::Phase::Running;

  SUBCASE("sole deployment terminates") {
    const auto check = h.controller.authorize_termination({"A", "Domain-X"}, {record_a});
    CHECK(check.approved);
  }

  SUBCASE("an active dependent blocks termination") {
    const auto check = h.controller.authorize_termination({"A", "Domain-X"}, {record_a, record_b});
    CHECK_FALSE(check.approved);
    CHECK(check.conflicting_deployment == "B");
  }

  SUBCASE("a terminated dependent does not block") {
    record_b.phase = registry::Phase::Terminated;
    const auto check = h.controller.authorize_termination({"A", "Domain-X"}, {record_a, record_b});
    CHECK(check.approved);
  }

  SUBCASE("unknown deployment") {
    CHECK_THROWS_AS(h.controller.authorize_termination({"missing", "Domain-X"}, {record_a}),
                    CaminoError);
  }
}
