#include "nsbgp/scenarios.hpp"

#include <algorithm>
#include <functional>

#include "nsbgp/policy.hpp"
#include "nsbgp/rng.hpp"

namespace nsbgp::scenarios {

using intra_as::AsConfig;
using intra_as::AsInternal;

Instance bad_gadget(Mode mode) {
  InstanceBuilder b;
  for (const char* name : {"1", "2", "3", "d"}) b.add_node(name);
  b.destination("d").mode(mode);
  b.customer_of("d", "1").customer_of("d", "2").customer_of("d", "3");
  b.customer_of("3", "1").customer_of("3", "2");
  b.peers("1", "2");
  b.ranking("1", {b.path({"1", "3", "d"}), b.path({"1", "d"})});
  b.ranking("2", {b.path({"2", "1", "d"}), b.path({"2", "d"})});
  b.ranking("3", {b.path({"3", "2", "d"}), b.path({"3", "d"})});
  return with_mode(b.build(), mode);
}

ProtocolState direct_route_state(const Instance& inst) {
  ProtocolState state(inst);
  const NodeIndex d = inst.dest();
  const Path origin{d};
  state.node(d).own = origin;
  for (NodeIndex v : inst.neighbors(d)) {
    if (is_exportable(inst, d, v, origin)) state.set_exported(inst, d, v, origin);
  }
  for (NodeIndex v : inst.neighbors(d)) {
    const Path direct{v, d};
    state.node(v).own = direct;
    for (NodeIndex w : inst.neighbors(v)) {
      if (is_exportable(inst, v, w, direct)) state.set_exported(inst, v, w, direct);
    }
  }
  return state;
}

namespace {

InstanceBuilder fig_topology() {
  InstanceBuilder b;
  for (const char* name : {"1", "2", "3", "4", "5", "6", "7", "d"}) b.add_node(name);
  b.destination("d");
  for (const char* c : {"2", "3", "4", "5", "6", "7"}) b.customer_of(c, "1");
  for (const char* p : {"5", "6", "7"}) b.customer_of("d", p);
  return b;
}

}  // namespace

Instance fig3_gadget() {
  auto b = fig_topology();
  b.mode(Mode::kConventional);
  const auto via5 = b.path({"1", "5", "d"});
  const auto via6 = b.path({"1", "6", "d"});
  const auto via7 = b.path({"1", "7", "d"});
  b.ranking("1", {via5, via6, via7});
  for (const char* c : {"2", "3", "4"}) {
    b.ranking(c, {b.path({c, "1", "5", "d"}), b.path({c, "1", "6", "d"}),
                  b.path({c, "1", "7", "d"})});
  }
  for (const char* p : {"5", "6", "7"}) b.ranking(p, {b.path({p, "d"})});
  return b.build();
}

Instance fig4_gadget() {
  auto b = fig_topology();
  b.mode(Mode::kNeighborSpecific);
  const auto via5 = b.path({"1", "5", "d"});
  const auto via6 = b.path({"1", "6", "d"});
  const auto via7 = b.path({"1", "7", "d"});
  b.ranking("1", {via5, via6, via7});
  b.ranking("1", "2", {via5, via6, via7});
  b.ranking("1", "3", {via6, via5, via7});
  b.ranking("1", "4", {via7, via6, via5});
  for (const char* p : {"5", "6", "7"}) b.ranking("1", p, {via5, via6, via7});
  for (const char* c : {"2", "3", "4"}) {
    b.ranking(c, {b.path({c, "1", "5", "d"}), b.path({c, "1", "6", "d"}),
                  b.path({c, "1", "7", "d"})});
    b.ranking(c, "1", {});
  }
  for (const char* p : {"5", "6", "7"}) {
    b.ranking(p, {b.path({p, "d"})});
    b.ranking(p, "1", {b.path({p, "d"})});
    b.ranking(p, "d", {b.path({p, "d"})});
  }
  return b.build();
}

PathAttributes fig4_attributes(const Instance& inst) {
  auto path = [&](const char* via) {
    return Path{inst.index("1"), inst.index(via), inst.index("d")};
  };
  PathAttributes attrs;
  attrs[path("5")] = {20, 0.5, 5, 2};
  attrs[path("6")] = {35, 0.9, 4, 2};
  attrs[path("7")] = {60, 0.3, 1, 2};
  return attrs;
}

std::map<NodeIndex, ServiceModel> fig4_assignments(const Instance& inst) {
  return {{inst.index("2"), Subscription{MenuItem::kShortestPath}},
          {inst.index("3"), Subscription{MenuItem::kMostSecure}},
          {inst.index("4"), Subscription{MenuItem::kLeastExpensive}}};
}

AsConfig fig1_config() {
  AsConfig c;
  c.name = "AS0";
  c.destination = "d";
  c.routers = {"R1", "R2", "R3", "R4"};
  c.igp = {{"R1", "R3", 1}, {"R2", "R4", 1}, {"R1", "R2", 5}, {"R3", "R4", 5}};
  c.external_links = {
      {"R1-Peer1", "R1", "Peer1", Relation::kPeer},
      {"R2-Peer1", "R2", "Peer1", Relation::kPeer},
      {"R2-Customer1", "R2", "Customer1", Relation::kCustomer},
      {"R3-Customer2", "R3", "Customer2", Relation::kCustomer},
      {"R4-Peer2", "R4", "Peer2", Relation::kPeer},
  };
  c.offers = {{"R3-Customer2", {"Customer2", "d"}}, {"R4-Peer2", {"Peer2", "d"}}};
  c.classifier.relationship_rank = {
      {Relation::kCustomer, 0}, {Relation::kPeer, 0}, {Relation::kProvider, 1}};
  return c;
}

AsInternal fig1_gadget() { return AsInternal(fig1_config()); }

intra_as::SelectionOptions fig1_forced_r1() {
  intra_as::SelectionOptions options;
  options.pinned_best = {{"R2", "R3-Customer2"}};
  return options;
}

AsConfig fig5_config() {
  AsConfig c;
  c.name = "Z";
  c.destination = "D";
  c.routers = {"R1", "R2", "R3", "R4", "R5"};
  c.igp = {{"R1", "R5", 1}, {"R2", "R5", 1}, {"R3", "R5", 1}, {"R4", "R5", 2}};
  c.sessions = {{"R1", "R5"}, {"R2", "R5"}, {"R3", "R5"}, {"R4", "R5"}};
  c.external_links = {
      {"R1-C1", "R1", "C1", Relation::kCustomer},
      {"R1-C2", "R1", "C2", Relation::kCustomer},
      {"R2-C3", "R2", "C3", Relation::kCustomer},
      {"R3-R6", "R3", "R6", Relation::kPeer},
      {"R3-R7", "R3", "R7", Relation::kCustomer},
      {"R4-R8", "R4", "R8", Relation::kPeer},
      {"R4-R9", "R4", "R9", Relation::kProvider},
  };
  c.offers = {{"R3-R6", {"R6", "D"}},
              {"R3-R7", {"R7", "D"}},
              {"R4-R8", {"R8", "D"}},
              {"R4-R9", {"R9", "D"}}};
  c.classifier.relationship_rank = {
      {Relation::kCustomer, 0}, {Relation::kPeer, 0}, {Relation::kProvider, 0}};
  return c;
}

AsInternal fig5_as() { return AsInternal(fig5_config()); }

std::map<intra_as::LinkId, std::vector<intra_as::LinkId>> fig5_customization() {
  return {{"R1-C1", {"R3-R6"}}, {"R1-C2", {"R3-R7"}}};
}

namespace {

enum class Edge : std::uint8_t { kNone, kCustomerOf, kProviderOf, kPeer };

constexpr std::size_t kPathCap = 512;

/// Traffic climbs to providers, crosses at most one peer link, then only
/// descends to customers.
bool valley_free(const std::vector<std::vector<Edge>>& edge,
                 const std::vector<NodeIndex>& path) {
  // 0: still climbing, 1: crossed a peer link, 2: descending
  int phase = 0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    switch (edge[path[i]][path[i + 1]]) {
      case Edge::kCustomerOf:  // next hop is our provider
        if (phase != 0) return false;
        break;
      case Edge::kPeer:
        if (phase != 0) return false;
        phase = 1;
        break;
      case Edge::kProviderOf:
        phase = 2;
        break;
      case Edge::kNone:
        return false;
    }
  }
  return true;
}

std::vector<std::vector<NodeIndex>> simple_paths(
    const std::vector<std::vector<NodeIndex>>& adjacency, NodeIndex from,
    NodeIndex to) {
  std::vector<std::vector<NodeIndex>> out;
  std::vector<NodeIndex> stack{from};
  std::vector<bool> on_path(adjacency.size(), false);
  on_path[from] = true;
  std::function<void(NodeIndex)> walk = [&](NodeIndex at) {
    for (NodeIndex next : adjacency[at]) {
      if (out.size() >= kPathCap) return;
      if (on_path[next]) continue;
      stack.push_back(next);
      if (next == to) {
        out.push_back(stack);
      } else {
        on_path[next] = true;
        walk(next);
        on_path[next] = false;
      }
      stack.pop_back();
    }
  };
  walk(from);
  return out;
}

std::optional<Instance> generate(Rng& rng, std::size_t n, Mode mode, const GeneratorConfig& cfg) {
  InstanceBuilder b;
  const NodeIndex d = b.add_node("d");
  for (std::size_t i = 1; i < n; ++i) b.add_node(std::to_string(i));
  b.destination("d").mode(mode);

  std::vector<std::vector<Edge>> edge(n, std::vector<Edge>(n, Edge::kNone));
  auto set_customer = [&](NodeIndex customer, NodeIndex provider) {
    edge[customer][provider] = Edge::kCustomerOf;
    edge[provider][customer] = Edge::kProviderOf;
    b.relationship(Relationship::customer_of(customer, provider));
  };
  auto set_peers = [&](NodeIndex x, NodeIndex y) {
    edge[x][y] = edge[y][x] = Edge::kPeer;
    b.relationship(Relationship::peers(x, y));
  };

  // Customers always sit earlier in `order`, so customer->provider edges
  // cannot form a cycle.
  std::vector<NodeIndex> order{d};
  std::size_t fixed = 1;
  if (cfg.inject_gadget) {
    order = {d, 3, 1, 2};
    fixed = 4;
    set_customer(d, 1);
    set_customer(d, 2);
    set_customer(d, 3);
    set_customer(3, 1);
    set_customer(3, 2);
    set_peers(1, 2);
  }
  std::vector<NodeIndex> rest;
  for (std::size_t i = fixed; i < n; ++i) rest.push_back(static_cast<NodeIndex>(i));
  rng.shuffle(rest);
  order.insert(order.end(), rest.begin(), rest.end());

  for (std::size_t k = fixed; k < n; ++k) {
    const auto j = static_cast<std::size_t>(rng.below(k));
    set_customer(order[j], order[k]);
  }
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (k < fixed) continue;
      if (edge[order[j]][order[k]] != Edge::kNone) continue;
      if (rng.unit() < cfg.provider_probability) {
        set_customer(order[j], order[k]);
      } else if (rng.unit() < cfg.peer_probability) {
        set_peers(order[j], order[k]);
      }
    }
  }
  const Instance topology = b.build();

  std::vector<std::vector<NodeIndex>> adjacency(n);
  for (std::size_t u = 0; u < n; ++u) {
    auto nb = topology.neighbors(static_cast<NodeIndex>(u));
    adjacency[u].assign(nb.begin(), nb.end());
  }

  std::vector<std::vector<Path>> paths(n);
  for (std::size_t u = 0; u < n; ++u) {
    const auto node = static_cast<NodeIndex>(u);
    if (node == d) continue;
    if (cfg.inject_gadget && node <= 3) {
      const NodeIndex preferred = node == 1 ? 3 : node == 2 ? 1 : 2;
      paths[u] = {Path{node, preferred, d}, Path{node, d}};
      continue;
    }
    std::vector<Path> preferred;
    std::vector<Path> others;
    for (auto& p : simple_paths(adjacency, node, d)) {
      (valley_free(edge, p) ? preferred : others).push_back(Path(std::move(p)));
    }
    rng.shuffle(preferred);
    rng.shuffle(others);
    preferred.insert(preferred.end(), others.begin(), others.end());
    const auto target = static_cast<std::size_t>(rng.between(
        static_cast<std::int64_t>(cfg.min_paths), static_cast<std::int64_t>(cfg.max_paths)));
    if (preferred.size() > target) preferred.resize(target);
    paths[u] = std::move(preferred);
  }

  auto learned_from_customer = [&](const Path& p) {
    return topology.relation(p.head(), *p.next_hop()) == Relation::kCustomer;
  };

  for (std::size_t u = 0; u < n; ++u) {
    const auto node = static_cast<NodeIndex>(u);
    if (node == d) continue;
    if (cfg.inject_gadget && node <= 3) {
      b.ranking(RankingKey{node, std::nullopt}, paths[u]);
      continue;
    }
    if (mode != Mode::kNeighborSpecific) {
      std::vector<Path> ranking = paths[u];
      if (cfg.safe) {
        auto split = std::stable_partition(ranking.begin(), ranking.end(),
                                           learned_from_customer);
        std::vector<Path> head(ranking.begin(), split);
        std::vector<Path> tail(split, ranking.end());
        rng.shuffle(head);
        rng.shuffle(tail);
        head.insert(head.end(), tail.begin(), tail.end());
        ranking = std::move(head);
      } else {
        rng.shuffle(ranking);
      }
      b.ranking(RankingKey{node, std::nullopt}, std::move(ranking));
      continue;
    }
    std::vector<Path> self = paths[u];
    rng.shuffle(self);
    b.ranking(RankingKey{node, std::nullopt}, std::move(self));
    for (NodeIndex v : topology.neighbors(node)) {
      std::vector<Path> ranking;
      for (const auto& p : paths[u]) {
        if (!cfg.safe || is_exportable_gao_rexford(topology, node, v, p)) {
          ranking.push_back(p);
        }
      }
      rng.shuffle(ranking);
      b.ranking(RankingKey{node, v}, std::move(ranking));
    }
  }

  if (cfg.inject_export_violation) {
    struct Candidate {
      NodeIndex u;
      NodeIndex v;
      Path p;
    };
    std::vector<Candidate> options;
    for (std::size_t u = 0; u < n; ++u) {
      const auto node = static_cast<NodeIndex>(u);
      for (NodeIndex v : topology.neighbors(node)) {
        if (topology.relation(node, v) == Relation::kCustomer) continue;
        for (const auto& p : paths[u]) {
          if (!p.contains(v) && !is_exportable_gao_rexford(topology, node, v, p)) {
            options.push_back({node, v, p});
          }
        }
      }
    }
    if (options.empty()) return std::nullopt;
    const auto& pick = options[rng.below(options.size())];
    const Instance draft = b.build();
    std::vector<Path> ranking{pick.p};
    for (const auto& p : draft.neighbor_ranking(pick.u, pick.v)->acceptable()) {
      if (p != pick.p) ranking.push_back(p);
    }
    b.ranking(RankingKey{pick.u, pick.v}, std::move(ranking));
  }
  return b.build();
}

}  // namespace

Instance random_instance(std::uint64_t seed, std::size_t n_nodes, Mode mode,
                         const GeneratorConfig& cfg) {
  if (n_nodes < 2) throw ModelError("random instances need at least 2 nodes");
  if (n_nodes > 64) throw ModelError("random instances are limited to 64 nodes");
  if (cfg.min_paths < 1 || cfg.min_paths > cfg.max_paths) {
    throw ModelError("path diversity range is empty");
  }
  if (cfg.provider_probability < 0 || cfg.provider_probability > 1 ||
      cfg.peer_probability < 0 || cfg.peer_probability > 1) {
    throw ModelError("edge probabilities must lie in [0, 1]");
  }
  if (cfg.safe && (cfg.inject_export_violation || cfg.inject_gadget)) {
    throw ModelError("a safe instance cannot carry an injected violation");
  }
  if (cfg.inject_export_violation && mode != Mode::kNeighborSpecific) {
    throw ModelError("export violations are injected into per-neighbor rankings only");
  }
  if (cfg.inject_gadget && mode == Mode::kNeighborSpecific) {
    throw ModelError("gadget injection needs a single ranking per node");
  }
  if (cfg.inject_gadget && n_nodes < 4) {
    throw ModelError("gadget injection needs at least 4 nodes");
  }
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    Rng rng(Rng::derive(seed, attempt));
    if (auto inst = generate(rng, n_nodes, mode, cfg)) return *inst;
  }
  throw ModelError("no topology for seed " + std::to_string(seed) +
                   " admits an export violation");
}

PathAttributes random_attributes(std::uint64_t seed, const Instance& inst) {
  std::set<Path> all;
  for (const auto& [key, ranking] : inst.rankings()) {
    all.insert(ranking.acceptable().begin(), ranking.acceptable().end());
  }
  Rng rng(Rng::derive(seed, 0xA77));
  PathAttributes attrs;
  for (const auto& p : all) {
    PathMetrics m;
    m.latency_ms = 5 + 195 * rng.unit();
    m.security_score = rng.unit();
    m.monetary_cost = 10 * rng.unit();
    m.hop_count = static_cast<int>(p.size()) - 1;
    attrs.emplace(p, m);
  }
  return attrs;
}

}  // namespace nsbgp::scenarios
