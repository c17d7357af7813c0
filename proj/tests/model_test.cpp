#include <gtest/gtest.h>

#include "helpers.hpp"
#include "nsbgp/model.hpp"
#include "nsbgp/scenarios.hpp"

namespace nsbgp {
namespace {

using testing::path_of;

TEST(Path, EmptyIsTheDefault) {
  Path p;
  EXPECT_TRUE(p.empty());
  EXPECT_FALSE(p.next_hop());
  EXPECT_TRUE(p.tail().empty());
}

TEST(Path, Accessors) {
  Path p{4, 2, 0};
  EXPECT_EQ(p.head(), 4);
  EXPECT_EQ(p.last(), 0);
  EXPECT_EQ(p.next_hop(), 2);
  EXPECT_EQ(p.tail(), (Path{2, 0}));
  EXPECT_TRUE(p.contains(2));
  EXPECT_FALSE(p.contains(3));
  EXPECT_TRUE(p.is_simple());
  EXPECT_FALSE((Path{1, 2, 1}).is_simple());
}

TEST(Path, ExtendRejectsEmptyAndLoops) {
  EXPECT_FALSE(extend(Path{}, 1));
  EXPECT_FALSE(extend(Path{2, 1, 0}, 1));
  EXPECT_EQ(extend(Path{2, 0}, 1), (Path{1, 2, 0}));
}

TEST(Ranking, EmptySitsAfterEveryAcceptablePath) {
  RankingFunction r(1, {Path{1, 3, 0}, Path{1, 0}});
  EXPECT_EQ(r.rank(Path{1, 3, 0}), 0u);
  EXPECT_EQ(r.rank(Path{1, 0}), 1u);
  EXPECT_EQ(r.rank(Path{}), 2u);
  EXPECT_FALSE(r.rank(Path{1, 2, 0}));
  EXPECT_TRUE(r.accepts(Path{}));
  EXPECT_FALSE(r.accepts(Path{1, 2, 0}));
}

TEST(Modes, RoundTripNames) {
  for (auto m : {Mode::kConventional, Mode::kFilterFirst, Mode::kNeighborSpecific}) {
    EXPECT_EQ(parse_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_mode("hybrid"), ModelError);
  for (auto r : {Relation::kCustomer, Relation::kPeer, Relation::kProvider}) {
    EXPECT_EQ(parse_relation(to_string(r)), r);
  }
}

TEST(Instance, BadGadgetTopology) {
  const auto inst = scenarios::bad_gadget();
  EXPECT_EQ(inst.node_count(), 4u);
  EXPECT_EQ(inst.name(inst.dest()), "d");
  const auto n1 = inst.index("1");
  const auto n3 = inst.index("3");
  const auto d = inst.index("d");
  EXPECT_EQ(inst.relation(n3, n1), Relation::kProvider);
  EXPECT_EQ(inst.relation(n1, n3), Relation::kCustomer);
  EXPECT_EQ(inst.relation(inst.index("1"), inst.index("2")), Relation::kPeer);
  EXPECT_EQ(inst.relation(d, n1), Relation::kProvider);
  EXPECT_FALSE(inst.relation(n1, n1));
  const auto nb = inst.neighbors(n1);
  EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
  EXPECT_EQ(nb.size(), 3u);
  EXPECT_EQ(inst.render(path_of(inst, {"1", "3", "d"})), "(1 3 d)");
  EXPECT_EQ(inst.render(Path{}), "()");
  EXPECT_TRUE(validate(inst).ok());
}

TEST(Instance, UnknownNamesThrow) {
  InstanceBuilder b;
  b.add_node("a");
  EXPECT_THROW(b.customer_of("a", "zz"), ModelError);
  EXPECT_THROW(b.path({"a", "zz"}), ModelError);
  const auto inst = b.destination("missing").build();
  EXPECT_FALSE(inst.destination());
  EXPECT_THROW(inst.dest(), ModelError);
}

InstanceBuilder line() {
  InstanceBuilder b;
  for (const char* n : {"a", "b", "d"}) b.add_node(n);
  b.destination("d").customer_of("d", "b").customer_of("b", "a");
  return b;
}

TEST(Validate, AcceptsMinimalInstance) {
  auto b = line();
  b.ranking("a", {b.path({"a", "b", "d"})});
  b.ranking("b", {b.path({"b", "d"})});
  const auto report = validate(b.build());
  EXPECT_TRUE(report.ok());
}

TEST(Validate, ReportsEachViolationKind) {
  struct Case {
    const char* what;
    std::function<void(InstanceBuilder&)> edit;
  };
  const std::vector<Case> cases = {
      {"path does not end at destination", [](auto& b) { b.ranking("a", {b.path({"a", "b"})}); }},
      {"path does not start at owner", [](auto& b) { b.ranking("a", {b.path({"b", "d"})}); }},
      {"path uses non-edge", [](auto& b) { b.ranking("a", {b.path({"a", "d"})}); }},
      {"path repeats a node",
       [](auto& b) { b.ranking("a", {b.path({"a", "b", "a", "b", "d"})}); }},
      {"empty path listed", [](auto& b) { b.ranking("a", {Path{}}); }},
      {"duplicate path in ranking",
       [](auto& b) { b.ranking("a", {b.path({"a", "b", "d"}), b.path({"a", "b", "d"})}); }},
      {"destination has a ranking", [](auto& b) { b.ranking("d", {}); }},
      {"per-neighbor ranking outside neighbor-specific mode",
       [](auto& b) { b.ranking("a", "b", {}); }},
      {"self relationship", [](auto& b) { b.peers("a", "a"); }},
      {"duplicate relationship", [](auto& b) { b.peers("a", "b"); }},
  };
  for (const auto& c : cases) {
    auto b = line();
    b.ranking("a", {b.path({"a", "b", "d"})});
    b.ranking("b", {b.path({"b", "d"})});
    c.edit(b);
    const auto report = validate(b.build());
    EXPECT_TRUE(report.has(c.what)) << c.what;
  }
}

TEST(Validate, MissingRankingsAndDestination) {
  auto b = line();
  b.ranking("b", {b.path({"b", "d"})});
  EXPECT_TRUE(validate(b.build()).has("missing ranking"));

  InstanceBuilder nd;
  nd.add_node("a");
  nd.destination("d");
  EXPECT_TRUE(validate(nd.build()).has("destination missing"));
}

TEST(Validate, NeighborSpecificNeedsEveryNeighborRanking) {
  auto b = line();
  b.mode(Mode::kNeighborSpecific);
  b.ranking("a", {b.path({"a", "b", "d"})});
  b.ranking("b", {b.path({"b", "d"})});
  b.ranking("b", "d", {b.path({"b", "d"})});
  const auto report = validate(b.build());
  EXPECT_TRUE(report.has("missing neighbor ranking"));
  EXPECT_FALSE(report.has("missing self ranking"));
}

TEST(Validate, WarnsAboutDisconnectedNodes) {
  auto b = line();
  b.add_node("island");
  b.ranking("a", {b.path({"a", "b", "d"})});
  b.ranking("b", {b.path({"b", "d"})});
  b.ranking("island", {});
  const auto report = validate(b.build());
  EXPECT_TRUE(report.ok());
  EXPECT_FALSE(report.warnings.empty());
}

TEST(WithMode, EmbedsSingleRankingIntoEveryNeighbor) {
  const auto conv = scenarios::bad_gadget();
  const auto ns = with_mode(conv, Mode::kNeighborSpecific);
  EXPECT_EQ(ns.mode(), Mode::kNeighborSpecific);
  EXPECT_TRUE(validate(ns).ok());
  for (std::size_t u = 0; u < ns.node_count(); ++u) {
    const auto node = static_cast<NodeIndex>(u);
    if (node == ns.dest()) continue;
    for (NodeIndex v : ns.neighbors(node)) {
      ASSERT_NE(ns.neighbor_ranking(node, v), nullptr);
      EXPECT_EQ(*ns.neighbor_ranking(node, v), *conv.node_ranking(node));
    }
  }
  EXPECT_EQ(with_mode(ns, Mode::kConventional), conv);
  EXPECT_EQ(with_mode(conv, Mode::kFilterFirst).rankings(), conv.rankings());
}

}  // namespace
}  // namespace nsbgp
