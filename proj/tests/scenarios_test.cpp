#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"
#include "nsbgp/engine.hpp"
#include "nsbgp/oracle.hpp"
#include "nsbgp/policy.hpp"
#include "nsbgp/scenarios.hpp"

namespace nsbgp {
namespace {

using testing::node;
using testing::path_of;

constexpr Mode kModes[] = {Mode::kConventional, Mode::kFilterFirst, Mode::kNeighborSpecific};

TEST(Canonical, AllValidate) {
  for (const auto& inst : {scenarios::bad_gadget(), scenarios::bad_gadget(Mode::kFilterFirst),
                           scenarios::fig3_gadget(), scenarios::fig4_gadget()}) {
    const auto report = validate(inst);
    EXPECT_TRUE(report.ok()) << (report.violations.empty() ? "" : report.violations[0].what);
  }
}

TEST(Canonical, DirectRouteState) {
  const auto inst = scenarios::bad_gadget();
  const auto s = scenarios::direct_route_state(inst);
  EXPECT_EQ(render_selections(inst, s), "((1 d), (2 d), (3 d))");
  // 3's direct route is customer-learned, so its providers hear it.
  EXPECT_EQ(s.exported(inst, node(inst, "3"), node(inst, "1")), path_of(inst, {"3", "d"}));
  EXPECT_EQ(s.exported(inst, node(inst, "1"), node(inst, "2")), path_of(inst, {"1", "d"}));
}

// Node 1's exports towards its three customers once the run settles.
std::set<Path> exports_to_customers(const Instance& inst, const ProtocolState& s) {
  std::set<Path> out;
  for (const char* c : {"2", "3", "4"}) out.insert(s.exported(inst, node(inst, "1"), node(inst, c)));
  return out;
}

TEST(Fig3Fig4, SharedVersusPerCustomerExports) {
  const auto conv = scenarios::fig3_gadget();
  const auto a = run(conv, RoundRobin{});
  ASSERT_TRUE(std::holds_alternative<Converged>(a));
  EXPECT_EQ(exports_to_customers(conv, std::get<Converged>(a).state),
            std::set<Path>{path_of(conv, {"1", "5", "d"})});

  const auto ns = scenarios::fig4_gadget();
  const auto b = run(ns, RoundRobin{});
  ASSERT_TRUE(std::holds_alternative<Converged>(b));
  const auto& s = std::get<Converged>(b).state;
  EXPECT_EQ(s.exported(ns, node(ns, "1"), node(ns, "2")), path_of(ns, {"1", "5", "d"}));
  EXPECT_EQ(s.exported(ns, node(ns, "1"), node(ns, "3")), path_of(ns, {"1", "6", "d"}));
  EXPECT_EQ(s.exported(ns, node(ns, "1"), node(ns, "4")), path_of(ns, {"1", "7", "d"}));
  EXPECT_EQ(s.own(node(ns, "2")), path_of(ns, {"2", "1", "5", "d"}));
}

TEST(Fig4, AttributesCoverNodeOnesRoutes) {
  const auto inst = scenarios::fig4_gadget();
  const auto attrs = scenarios::fig4_attributes(inst);
  for (const auto& p : inst.node_ranking(node(inst, "1"))->acceptable()) {
    ASSERT_TRUE(attrs.count(p));
    EXPECT_EQ(attrs.at(p).hop_count, 2);
  }
  const auto assignments = scenarios::fig4_assignments(inst);
  EXPECT_EQ(assignments.size(), 3u);
}

TEST(Generator, DeterministicAndValid) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (Mode mode : kModes) {
      const auto a = scenarios::random_instance(seed, 3 + seed % 6, mode);
      EXPECT_EQ(a, scenarios::random_instance(seed, 3 + seed % 6, mode));
      EXPECT_TRUE(validate(a).ok()) << seed;
      EXPECT_EQ(a.node_count(), 3 + seed % 6);
      EXPECT_EQ(a.name(a.dest()), "d");
      EXPECT_EQ(a.mode(), mode);
      EXPECT_TRUE(check_topology_condition(a).pass);
    }
  }
  EXPECT_FALSE(scenarios::random_instance(1, 7, Mode::kConventional) ==
               scenarios::random_instance(2, 7, Mode::kConventional));
}

TEST(Generator, SeedSevenExamples) {
  const auto safe = scenarios::random_instance(7, 6, Mode::kNeighborSpecific);
  EXPECT_TRUE(check_nsbgp_safety(safe).pass);
  EXPECT_EQ(safe, scenarios::random_instance(7, 6, Mode::kNeighborSpecific));
  scenarios::GeneratorConfig injected;
  injected.safe = false;
  injected.inject_export_violation = true;
  EXPECT_FALSE(check_export_condition(scenarios::random_instance(7, 6, Mode::kNeighborSpecific, injected)).pass);
}

TEST(Canonical, AsScenariosAreValidAndTunnelsFollowSelection) {
  EXPECT_NO_THROW(intra_as::AsInternal(scenarios::fig1_config()));
  EXPECT_NO_THROW(intra_as::AsInternal(scenarios::fig5_config()));
  const auto as = scenarios::fig1_gadget();
  const auto sel = intra_as::egress_selection(as, intra_as::SelectionMode::kFilterFirst);
  const auto table = intra_as::assign_tunnels(as, sel);
  std::size_t routed = 0;
  for (const auto& [ingress, route] : sel) {
    if (!route) {
      EXPECT_FALSE(table.entries.count(ingress));
      continue;
    }
    ++routed;
    EXPECT_EQ(table.entries.at(ingress).egress_link, route->link);
    EXPECT_EQ(table.entries.at(ingress).egress_router, as.link(route->link).router);
  }
  EXPECT_EQ(table.entries.size(), routed);
  EXPECT_EQ(table.entries.at("R2-Peer1").egress_router, "R3");
}

TEST(Generator, ContradictoryConfigsThrow) {
  scenarios::GeneratorConfig export_violation;
  export_violation.inject_export_violation = true;
  EXPECT_THROW(scenarios::random_instance(1, 6, Mode::kConventional, export_violation), ModelError);
  scenarios::GeneratorConfig gadget;
  gadget.inject_gadget = true;
  EXPECT_THROW(scenarios::random_instance(1, 6, Mode::kNeighborSpecific, gadget), ModelError);
  EXPECT_THROW(scenarios::random_instance(1, 3, Mode::kConventional, gadget), ModelError);
  EXPECT_THROW(scenarios::random_instance(1, 1, Mode::kConventional), ModelError);
}

TEST(Generator, InjectedGadgetOscillates) {
  scenarios::GeneratorConfig gadget;
  gadget.safe = false;
  gadget.inject_gadget = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = scenarios::random_instance(seed, 5, Mode::kConventional, gadget);
    EXPECT_FALSE(check_gr_preference(inst).pass) << seed;
    EXPECT_EQ(oracle::exhaustive_search(inst).verdict, oracle::Verdict::kCycleFound) << seed;
  }
}

TEST(Generator, AttributesCoverEveryRankedPath) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = scenarios::random_instance(seed, 7, Mode::kNeighborSpecific);
    const auto attrs = scenarios::random_attributes(seed, inst);
    EXPECT_EQ(attrs, scenarios::random_attributes(seed, inst));
    for (const auto& [key, ranking] : inst.rankings()) {
      for (const auto& p : ranking.acceptable()) {
        ASSERT_TRUE(attrs.count(p));
        const auto& m = attrs.at(p);
        EXPECT_EQ(m.hop_count, static_cast<int>(p.size()) - 1);
        EXPECT_GE(m.security_score, 0.0);
        EXPECT_LE(m.security_score, 1.0);
        EXPECT_GT(m.latency_ms, 0.0);
      }
    }
  }
}

}  // namespace
}  // namespace nsbgp
