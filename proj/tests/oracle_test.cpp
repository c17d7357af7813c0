#include <gtest/gtest.h>

#include <algorithm>

#include "helpers.hpp"
#include "nsbgp/engine.hpp"
#include "nsbgp/oracle.hpp"
#include "nsbgp/scenarios.hpp"

namespace nsbgp {
namespace {

using testing::path_of;
using testing::witness_replays;

// d -- a -- b, each a customer of the next: one acceptable path per node.
Instance chain(Mode mode) {
  InstanceBuilder b;
  for (const char* n : {"d", "a", "b"}) b.add_node(n);
  b.destination("d").mode(mode).customer_of("d", "a").customer_of("a", "b");
  if (mode == Mode::kNeighborSpecific) {
    b.ranking("a", {b.path({"a", "d"})});
    b.ranking("a", "b", {b.path({"a", "d"})});
    b.ranking("a", "d", {});
    b.ranking("b", {b.path({"b", "a", "d"})});
    b.ranking("b", "a", {});
  } else {
    b.ranking("a", {b.path({"a", "d"})});
    b.ranking("b", {b.path({"b", "a", "d"})});
  }
  return b.build();
}

bool contains(const std::vector<ProtocolState>& sorted, const ProtocolState& s) {
  return std::binary_search(sorted.begin(), sorted.end(), s);
}

TEST(Oracle, SearchSpaceCountsEmptyPerNode) {
  EXPECT_EQ(oracle::search_space(scenarios::bad_gadget()), 27u);
  EXPECT_EQ(oracle::search_space(chain(Mode::kConventional)), 4u);
}

TEST(Oracle, ChainByHand) {
  for (Mode mode : {Mode::kConventional, Mode::kFilterFirst, Mode::kNeighborSpecific}) {
    const auto inst = chain(mode);
    const auto stable = oracle::enumerate_stable_states(inst);
    ASSERT_EQ(stable.size(), 1u) << to_string(mode);
    EXPECT_EQ(stable[0].own(inst.index("b")), path_of(inst, {"b", "a", "d"}));
    // Initial, after a, after a then b; activating b first is a no-op.
    const auto result = oracle::exhaustive_search(inst);
    EXPECT_EQ(result.verdict, oracle::Verdict::kSafe);
    EXPECT_EQ(result.graph.vertices.size(), 3u);
    ASSERT_EQ(result.stable_vertices.size(), 1u);
    EXPECT_EQ(result.graph.vertices[result.stable_vertices[0]], stable[0]);
  }
}

TEST(Oracle, ConventionalBadGadgetHasNoStableStateAndACycle) {
  const auto inst = scenarios::bad_gadget();
  EXPECT_TRUE(oracle::enumerate_stable_states(inst).empty());
  const auto result = oracle::exhaustive_search(inst);
  EXPECT_EQ(result.verdict, oracle::Verdict::kCycleFound);
  EXPECT_TRUE(result.stable_vertices.empty());
  ASSERT_TRUE(result.witness);
  const auto& w = *result.witness;
  ASSERT_EQ(w.states.size(), w.schedule.size());
  for (std::size_t i = 0; i < w.states.size(); ++i) {
    EXPECT_EQ(oracle::step(inst, w.states[i], w.schedule[i]),
              w.states[(i + 1) % w.states.size()]);
  }
  EXPECT_TRUE(witness_replays(inst, w));
}

TEST(Oracle, FilterFirstBadGadgetHasOneStableStateAndIsSafe) {
  const auto inst = scenarios::bad_gadget(Mode::kFilterFirst);
  const auto stable = oracle::enumerate_stable_states(inst);
  ASSERT_EQ(stable.size(), 1u);
  EXPECT_EQ(render_selections(inst, stable[0]), "((1 3 d), (2 d), (3 2 d))");
  const auto result = oracle::exhaustive_search(inst);
  EXPECT_EQ(result.verdict, oracle::Verdict::kSafe);
  EXPECT_FALSE(result.witness);
  ASSERT_EQ(result.stable_vertices.size(), 1u);
  EXPECT_EQ(result.graph.vertices[result.stable_vertices[0]], stable[0]);
}

TEST(Oracle, BudgetsThrow) {
  const auto inst = scenarios::bad_gadget();
  EXPECT_THROW(oracle::enumerate_stable_states(inst, 10), oracle::SearchSpaceExceeded);
  EXPECT_THROW(oracle::exhaustive_search(inst, 2), oracle::StateBudgetExceeded);
}

TEST(Oracle, DotExport) {
  const auto inst = scenarios::bad_gadget(Mode::kFilterFirst);
  const auto result = oracle::exhaustive_search(inst);
  const auto dot = result.graph.to_dot(inst);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find(result.graph.vertices[0].digest()), std::string::npos);
  EXPECT_NE(dot.find("label=\"1\""), std::string::npos);
}

// Property: on every reachable state, the oracle's activation and fixed-point
// test agree with the engine's, and every stable vertex is enumerated.
TEST(Oracle, AgreesWithEngineOnReachableStates) {
  scenarios::GeneratorConfig unsafe;
  unsafe.safe = false;
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    for (Mode mode : {Mode::kConventional, Mode::kFilterFirst, Mode::kNeighborSpecific}) {
      const auto inst = scenarios::random_instance(seed, 4 + seed % 2, mode, seed % 3 ? scenarios::GeneratorConfig{} : unsafe);
      const auto stable = oracle::enumerate_stable_states(inst);
      const auto result = oracle::exhaustive_search(inst);
      for (std::size_t v = 0; v < result.graph.vertices.size(); ++v) {
        const auto& s = result.graph.vertices[v];
        for (NodeIndex u = 0; u < inst.node_count(); ++u) {
          ASSERT_EQ(activate(inst, s, u), result.graph.vertices[result.graph.successors[v][u]]);
          ++checked;
        }
        ASSERT_EQ(is_stable(inst, s), oracle::is_fixed_point(inst, s));
        ASSERT_EQ(is_stable(inst, s), contains(stable, s));
      }
      for (const auto& s : stable) ASSERT_TRUE(oracle::is_fixed_point(inst, s));
    }
  }
  EXPECT_GT(checked, 1000u);
}

}  // namespace
}  // namespace nsbgp
