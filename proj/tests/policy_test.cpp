#include <gtest/gtest.h>

#include "helpers.hpp"
#include "nsbgp/policy.hpp"
#include "nsbgp/scenarios.hpp"

namespace nsbgp {
namespace {

using testing::node;
using testing::path_of;

TEST(Export, GaoRexfordOnBadGadget) {
  const auto inst = scenarios::bad_gadget();
  const auto n1 = node(inst, "1"), n2 = node(inst, "2"), n3 = node(inst, "3"),
             d = node(inst, "d");
  // Customer-learned routes go everywhere.
  EXPECT_TRUE(is_exportable(inst, n1, n2, path_of(inst, {"1", "3", "d"})));
  EXPECT_TRUE(is_exportable(inst, n3, n1, path_of(inst, {"3", "d"})));
  // Provider-learned routes only go to customers.
  EXPECT_FALSE(is_exportable(inst, n3, n1, path_of(inst, {"3", "2", "d"})));
  EXPECT_TRUE(is_exportable(inst, n3, d, path_of(inst, {"3", "2", "d"})));
  // Peer-learned routes only go to customers.
  EXPECT_FALSE(is_exportable(inst, n2, n1, path_of(inst, {"2", "1", "d"})));
  EXPECT_TRUE(is_exportable(inst, n2, n3, path_of(inst, {"2", "1", "d"})));
  // The origin route goes everywhere; EMPTY never does.
  EXPECT_TRUE(is_exportable(inst, d, n1, Path{d}));
  EXPECT_FALSE(is_exportable(inst, n1, n2, Path{}));
}

TEST(Export, RejectsMalformedArguments) {
  const auto inst = scenarios::bad_gadget();
  const auto n1 = node(inst, "1"), n2 = node(inst, "2");
  EXPECT_THROW(is_exportable(inst, n1, n1, path_of(inst, {"1", "d"})), ModelError);
  EXPECT_THROW(is_exportable(inst, n1, n2, path_of(inst, {"2", "d"})), ModelError);
}

TEST(Export, LearnedClass) {
  const auto inst = scenarios::bad_gadget();
  EXPECT_EQ(learned_class(inst, path_of(inst, {"d"})), LearnedClass::kOrigin);
  EXPECT_EQ(learned_class(inst, path_of(inst, {"1", "3", "d"})), LearnedClass::kCustomer);
  EXPECT_EQ(learned_class(inst, path_of(inst, {"2", "1", "d"})), LearnedClass::kPeer);
  EXPECT_EQ(learned_class(inst, path_of(inst, {"3", "2", "d"})), LearnedClass::kProvider);
  EXPECT_THROW(learned_class(inst, Path{}), ModelError);
}

TEST(Export, ExplicitRulesFirstMatchWinsDefaultDeny) {
  auto base = scenarios::bad_gadget();
  InstanceBuilder b(base);
  const auto n1 = b.index("1"), n2 = b.index("2"), n3 = b.index("3");
  ExplicitExport policy;
  policy.rules.push_back({n2, n1, ExportRule::Action::kDeny, b.path({"2", "d"})});
  policy.rules.push_back({n2, n1, ExportRule::Action::kAllow, LearnedClass::kCustomer});
  policy.rules.push_back({n2, n1, ExportRule::Action::kAllow, LearnedClass::kPeer});
  b.export_policy(policy);
  const auto inst = b.build();
  EXPECT_FALSE(is_exportable(inst, n2, n1, path_of(inst, {"2", "d"})));
  EXPECT_TRUE(is_exportable(inst, n2, n1, path_of(inst, {"2", "3", "d"})));
  EXPECT_FALSE(is_exportable(inst, n2, n3, path_of(inst, {"2", "d"})));  // no rule
  // Under CONVENTIONAL, the configured rule lets 2 leak a peer route to a peer.
  const auto report = check_export_condition(inst);
  EXPECT_FALSE(report.pass);
  for (const auto& w : report.witnesses) EXPECT_TRUE(witness_fails(inst, Condition::kExport, w));
}

TEST(Topology, DetectsProviderCycleWithRotatedWitness) {
  InstanceBuilder b;
  for (const char* n : {"d", "a", "b", "c"}) b.add_node(n);
  b.destination("d").customer_of("d", "a");
  b.customer_of("b", "c").customer_of("c", "a").customer_of("a", "b");
  const auto inst = b.build();
  const auto report = check_topology_condition(inst);
  ASSERT_FALSE(report.pass);
  ASSERT_EQ(report.witnesses.size(), 1u);
  const auto& cycle = report.witnesses[0].nodes;
  ASSERT_EQ(cycle.size(), 3u);
  EXPECT_EQ(cycle[0], *std::min_element(cycle.begin(), cycle.end()));
  EXPECT_TRUE(witness_fails(inst, Condition::kTopology, report.witnesses[0]));
}

TEST(Topology, PeerLinksDoNotCount) {
  EXPECT_TRUE(check_topology_condition(scenarios::bad_gadget()).pass);
  EXPECT_TRUE(check_topology_condition(scenarios::fig4_gadget()).pass);
}

TEST(GrPreference, BadGadgetViolatesIt) {
  const auto inst = scenarios::bad_gadget();
  const auto report = check_gr_preference(inst);
  EXPECT_FALSE(report.pass);
  std::set<NodeIndex> owners;
  for (const auto& w : report.witnesses) {
    owners.insert(w.nodes.at(0));
    EXPECT_TRUE(witness_fails(inst, Condition::kGrPreference, w));
  }
  // Node 1 prefers its customer route, so only 2 and 3 are flagged.
  EXPECT_EQ(owners, (std::set<NodeIndex>{node(inst, "2"), node(inst, "3")}));
  EXPECT_THROW(check_gr_preference(with_mode(inst, Mode::kNeighborSpecific)), ModelError);
}

TEST(NsbgpSafety, Fig4Passes) {
  const auto report = check_nsbgp_safety(scenarios::fig4_gadget());
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.parts.size(), 2u);
  EXPECT_THROW(check_nsbgp_safety(scenarios::fig3_gadget()), ModelError);
}

TEST(NsbgpSafety, EmbeddedBadGadgetRanksNonExportableRoutes) {
  // Copying λ2 = [(2 1 d), (2 d)] to neighbor 1 offers a peer route to a peer.
  const auto ns = with_mode(scenarios::bad_gadget(), Mode::kNeighborSpecific);
  const auto report = check_nsbgp_safety(ns);
  EXPECT_FALSE(report.pass);
  for (const auto& w : report.witnesses) {
    EXPECT_TRUE(witness_fails(ns, Condition::kNsbgpSafety, w));
  }
}

TEST(NsbgpSafety, GeneratedInstancesMatchTheirConfig) {
  scenarios::GeneratorConfig unsafe;
  unsafe.safe = false;
  unsafe.inject_export_violation = true;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto safe = scenarios::random_instance(seed, 6, Mode::kNeighborSpecific);
    EXPECT_TRUE(check_nsbgp_safety(safe).pass) << seed;
    const auto bad = scenarios::random_instance(seed, 6, Mode::kNeighborSpecific, unsafe);
    const auto report = check_export_condition(bad);
    EXPECT_FALSE(report.pass) << seed;
    for (const auto& w : report.witnesses) {
      EXPECT_TRUE(witness_fails(bad, Condition::kExport, w)) << seed;
    }
  }
}

TEST(NsbgpSafety, SafeSingleRankingInstancesMeetGaoRexford) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    for (auto mode : {Mode::kConventional, Mode::kFilterFirst}) {
      const auto inst = scenarios::random_instance(seed, 7, mode);
      EXPECT_TRUE(check_topology_condition(inst).pass);
      EXPECT_TRUE(check_export_condition(inst).pass);
      EXPECT_TRUE(check_gr_preference(inst).pass);
    }
  }
}

}  // namespace
}  // namespace nsbgp
