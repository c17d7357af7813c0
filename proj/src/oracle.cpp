#include "nsbgp/oracle.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <unordered_map>

#include "nsbgp/policy.hpp"

namespace nsbgp::oracle {

namespace {

bool is_destination(const Instance& inst, NodeIndex u) {
  return inst.destination() && *inst.destination() == u;
}

/// Ranking consulted for u's announcement to v; nullopt neighbor = own use.
const RankingFunction& ranking_for(const Instance& inst, NodeIndex u,
                                   std::optional<NodeIndex> v) {
  const RankingFunction* ranking = nullptr;
  if (inst.mode() == Mode::kNeighborSpecific && v) {
    ranking = inst.neighbor_ranking(u, *v);
  } else {
    ranking = inst.node_ranking(u);
  }
  if (!ranking) {
    std::string what = "missing ranking for " + inst.name(u);
    if (v && inst.mode() == Mode::kNeighborSpecific) what += "->" + inst.name(*v);
    throw ModelError(what);
  }
  return *ranking;
}

/// Walks the preference list top-down and returns the first path that is
/// currently available at u: its next hop announces exactly its tail to u.
/// Only `export_to`-exportable paths qualify when given.
Path first_available(const Instance& inst, const ProtocolState& state,
                     NodeIndex u, const RankingFunction& ranking,
                     std::optional<NodeIndex> export_to) {
  for (const auto& p : ranking.acceptable()) {
    auto hop = p.next_hop();
    if (!hop || p.head() != u) continue;
    if (state.exported(inst, *hop, u) != p.tail()) continue;
    if (export_to && !is_exportable(inst, u, *export_to, p)) continue;
    return p;
  }
  return Path{};
}

std::vector<Path> intended_exports(const Instance& inst,
                                   const ProtocolState& state, NodeIndex u,
                                   Path* own) {
  const auto neighbors = inst.neighbors(u);
  std::vector<Path> out(neighbors.size());
  if (is_destination(inst, u)) {
    const Path origin{u};
    for (std::size_t s = 0; s < neighbors.size(); ++s) {
      if (is_exportable(inst, u, neighbors[s], origin)) out[s] = origin;
    }
    if (own) *own = origin;
    return out;
  }
  if (inst.mode() == Mode::kConventional) {
    Path best = first_available(inst, state, u, ranking_for(inst, u, std::nullopt),
                                std::nullopt);
    for (std::size_t s = 0; s < neighbors.size(); ++s) {
      if (!best.empty() && is_exportable(inst, u, neighbors[s], best)) out[s] = best;
    }
    if (own) *own = best;
    return out;
  }
  for (std::size_t s = 0; s < neighbors.size(); ++s) {
    out[s] = first_available(inst, state, u, ranking_for(inst, u, neighbors[s]),
                             neighbors[s]);
  }
  if (own) {
    *own = first_available(inst, state, u, ranking_for(inst, u, std::nullopt),
                           std::nullopt);
  }
  return out;
}

}  // namespace

ProtocolState step(const Instance& inst, const ProtocolState& state,
                   NodeIndex u) {
  ProtocolState out = state;
  Path own;
  out.node(u).exported = intended_exports(inst, state, u, &own);
  out.node(u).own = std::move(own);
  return out;
}

bool is_fixed_point(const Instance& inst, const ProtocolState& state) {
  for (std::size_t u = 0; u < inst.node_count(); ++u) {
    auto node = static_cast<NodeIndex>(u);
    Path own;
    auto exports = intended_exports(inst, state, node, &own);
    if (exports != state.node(node).exported || own != state.own(node)) {
      return false;
    }
  }
  return true;
}

std::uint64_t search_space(const Instance& inst) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t product = 1;
  for (std::size_t u = 0; u < inst.node_count(); ++u) {
    auto node = static_cast<NodeIndex>(u);
    if (is_destination(inst, node)) continue;
    std::set<Path> paths;
    for (const auto& [key, ranking] : inst.rankings()) {
      if (key.owner != node) continue;
      paths.insert(ranking.acceptable().begin(), ranking.acceptable().end());
    }
    const std::uint64_t options = paths.size() + 1;
    product = product > kMax / options ? kMax : product * options;
  }
  return product;
}

namespace {

/// Backtracking over what each node hears. For every neighbor w of u the
/// search picks which of u's acceptable paths via w is available (or none);
/// u's selection and exports then follow from its rankings. A choice is kept
/// only while it agrees with the exports of already-assigned neighbors, and
/// every leaf is re-checked as a fixed point.
class StableSearch {
 public:
  StableSearch(const Instance& inst, std::uint64_t limit)
      : inst_(inst), limit_(limit), partial_(inst) {
    const NodeIndex d = inst.dest();
    partial_.node(d).exported = intended_exports(inst, partial_, d, nullptr);
    assigned_.assign(inst.node_count(), false);
    assigned_[d] = true;
    heard_.resize(inst.node_count());
    options_.resize(inst.node_count());
    for (std::size_t u = 0; u < inst.node_count(); ++u) {
      auto node = static_cast<NodeIndex>(u);
      if (node == d) continue;
      order_.push_back(node);
      std::set<Path> usable;
      for (const auto& [key, ranking] : inst.rankings()) {
        if (key.owner != node) continue;
        for (const auto& p : ranking.acceptable()) {
          if (p.head() == node && p.next_hop()) usable.insert(p);
        }
      }
      const auto neighbors = inst.neighbors(node);
      heard_[u].assign(neighbors.size(), std::nullopt);
      options_[u].resize(neighbors.size());
      for (std::size_t s = 0; s < neighbors.size(); ++s) {
        options_[u][s].push_back(std::nullopt);
        for (const auto& p : usable) {
          if (*p.next_hop() == neighbors[s]) options_[u][s].push_back(p);
        }
      }
    }
  }

  std::vector<ProtocolState> run() {
    assign(0, 0);
    std::sort(found_.begin(), found_.end());
    return found_;
  }

 private:
  /// Whether w announcing `sent` to u matches u's choice for w.
  bool agrees(NodeIndex u, std::size_t slot, const Path& sent) const {
    const auto& choice = heard_[u][slot];
    if (choice) return sent == choice->tail();
    // Nothing usable: `sent` must not complete any of u's options via w.
    for (const auto& option : options_[u][slot]) {
      if (option && option->tail() == sent) return false;
    }
    return true;
  }

  void assign(std::size_t node_pos, std::size_t slot) {
    if (node_pos == order_.size()) {
      ProtocolState full = partial_;
      for (std::size_t u = 0; u < inst_.node_count(); ++u) {
        auto node = static_cast<NodeIndex>(u);
        Path own;
        intended_exports(inst_, full, node, &own);
        full.node(node).own = std::move(own);
      }
      if (is_fixed_point(inst_, full)) found_.push_back(std::move(full));
      return;
    }
    const NodeIndex u = order_[node_pos];
    const auto neighbors = inst_.neighbors(u);
    if (slot == neighbors.size()) {
      settle(node_pos);
      return;
    }
    const NodeIndex w = neighbors[slot];
    for (const auto& option : options_[u][slot]) {
      if (++explored_ > limit_) {
        throw SearchSpaceExceeded("stable-state search explored more than " +
                                  std::to_string(limit_) + " assignments");
      }
      heard_[u][slot] = option;
      if (assigned_[w] && !agrees(u, slot, partial_.exported(inst_, w, u))) continue;
      assign(node_pos, slot + 1);
    }
    heard_[u][slot] = std::nullopt;
  }

  /// Derives u's exports from its choices and checks them against the
  /// choices of assigned neighbors.
  void settle(std::size_t node_pos) {
    const NodeIndex u = order_[node_pos];
    const auto neighbors = inst_.neighbors(u);
    // Feed u its chosen routes through the unassigned neighbors' slots.
    for (std::size_t s = 0; s < neighbors.size(); ++s) {
      const NodeIndex w = neighbors[s];
      if (assigned_[w]) continue;
      partial_.set_exported(inst_, w, u, heard_[u][s] ? heard_[u][s]->tail() : Path{});
    }
    const auto exports = intended_exports(inst_, partial_, u, nullptr);
    for (std::size_t s = 0; s < neighbors.size(); ++s) {
      if (!assigned_[neighbors[s]]) partial_.set_exported(inst_, neighbors[s], u, Path{});
    }
    bool ok = true;
    for (std::size_t s = 0; s < neighbors.size() && ok; ++s) {
      const NodeIndex v = neighbors[s];
      if (!assigned_[v] || is_destination(inst_, v)) continue;
      const auto back = inst_.neighbor_slot(v, u);
      ok = agrees(v, *back, exports[s]);
    }
    if (ok) {
      const auto saved = partial_.node(u).exported;
      partial_.node(u).exported = exports;
      assigned_[u] = true;
      assign(node_pos + 1, 0);
      assigned_[u] = false;
      partial_.node(u).exported = saved;
    }
  }

  const Instance& inst_;
  std::uint64_t limit_;
  std::uint64_t explored_ = 0;
  ProtocolState partial_;
  std::vector<bool> assigned_;
  std::vector<NodeIndex> order_;
  std::vector<std::vector<std::optional<Path>>> heard_;
  std::vector<std::vector<std::vector<std::optional<Path>>>> options_;
  std::vector<ProtocolState> found_;
};

ProtocolState start_state(const Instance& inst) {
  ProtocolState state(inst);
  const NodeIndex d = inst.dest();
  Path own;
  state.node(d).exported = intended_exports(inst, state, d, &own);
  state.node(d).own = own;
  return state;
}

std::string tuple_label(const Instance& inst, const ProtocolState& state) {
  std::string out = "(";
  bool first = true;
  for (std::size_t u = 0; u < inst.node_count(); ++u) {
    auto node = static_cast<NodeIndex>(u);
    if (is_destination(inst, node)) continue;
    if (!first) out += ", ";
    first = false;
    out += inst.render(state.own(node));
  }
  return out + ")";
}

}  // namespace

std::vector<ProtocolState> enumerate_stable_states(const Instance& inst,
                                                   std::uint64_t limit) {
  const auto space = search_space(inst);
  if (space > limit) {
    throw SearchSpaceExceeded("search space " + std::to_string(space) +
                              " exceeds limit " + std::to_string(limit));
  }
  return StableSearch(inst, limit).run();
}

SearchResult exhaustive_search(const Instance& inst, std::size_t max_states) {
  const std::size_t n = inst.node_count();
  SearchResult result;
  auto& graph = result.graph;
  std::unordered_map<ProtocolState, std::size_t, ProtocolStateHash> index;
  std::vector<std::pair<std::size_t, NodeIndex>> parent;

  graph.vertices.push_back(start_state(inst));
  index.emplace(graph.vertices[0], 0);
  parent.push_back({0, 0});

  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    std::vector<std::size_t> out(n);
    for (std::size_t u = 0; u < n; ++u) {
      ProtocolState next = step(inst, graph.vertices[v], static_cast<NodeIndex>(u));
      auto [it, fresh] = index.emplace(next, graph.vertices.size());
      if (fresh) {
        if (graph.vertices.size() >= max_states) {
          throw StateBudgetExceeded("state graph exceeds " +
                                    std::to_string(max_states) + " states");
        }
        graph.vertices.push_back(std::move(next));
        parent.push_back({v, static_cast<NodeIndex>(u)});
      }
      out[u] = it->second;
    }
    graph.successors.push_back(std::move(out));
  }

  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    const auto& succ = graph.successors[v];
    if (std::all_of(succ.begin(), succ.end(), [&](std::size_t w) { return w == v; })) {
      result.stable_vertices.push_back(v);
    }
  }

  // Iterative DFS for a cycle that is not a self-loop.
  enum class Color : std::uint8_t { kWhite, kGrey, kBlack };
  std::vector<Color> color(graph.vertices.size(), Color::kWhite);
  struct Frame {
    std::size_t vertex;
    std::size_t next_node;
  };
  for (std::size_t root = 0; root < graph.vertices.size() && !result.witness; ++root) {
    if (color[root] != Color::kWhite) continue;
    std::vector<Frame> stack{{root, 0}};
    color[root] = Color::kGrey;
    while (!stack.empty() && !result.witness) {
      Frame& top = stack.back();
      if (top.next_node == n) {
        color[top.vertex] = Color::kBlack;
        stack.pop_back();
        continue;
      }
      const auto u = static_cast<NodeIndex>(top.next_node++);
      const std::size_t w = graph.successors[top.vertex][u];
      if (w == top.vertex) continue;
      if (color[w] == Color::kWhite) {
        color[w] = Color::kGrey;
        stack.push_back({w, 0});
      } else if (color[w] == Color::kGrey) {
        CycleWitness witness;
        auto start = std::find_if(stack.begin(), stack.end(),
                                  [&](const Frame& f) { return f.vertex == w; });
        for (auto it = start; it != stack.end(); ++it) {
          witness.states.push_back(graph.vertices[it->vertex]);
          witness.schedule.push_back(static_cast<NodeIndex>(it->next_node - 1));
        }
        for (std::size_t x = w; x != 0; x = parent[x].first) {
          witness.prefix.push_back(parent[x].second);
        }
        std::reverse(witness.prefix.begin(), witness.prefix.end());
        result.witness = std::move(witness);
        result.verdict = Verdict::kCycleFound;
      }
    }
  }
  return result;
}

std::string StateGraph::to_dot(const Instance& inst) const {
  std::string out = "digraph states {\n";
  for (const auto& v : vertices) {
    out += "  \"" + v.digest() + "\" [label=\"" + tuple_label(inst, v) + "\"];\n";
  }
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    for (std::size_t u = 0; u < successors[v].size(); ++u) {
      const std::size_t w = successors[v][u];
      if (w == v) continue;
      out += "  \"" + vertices[v].digest() + "\" -> \"" + vertices[w].digest() +
             "\" [label=\"" + inst.name(static_cast<NodeIndex>(u)) + "\"];\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace nsbgp::oracle
