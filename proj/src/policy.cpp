#include "nsbgp/policy.hpp"

#include <algorithm>

namespace nsbgp {

std::string_view to_string(Condition condition) {
  switch (condition) {
    case Condition::kExport:
      return "export-condition";
    case Condition::kTopology:
      return "topology-condition";
    case Condition::kGrPreference:
      return "gr-preference";
    case Condition::kNsbgpSafety:
      return "nsbgp-safety";
  }
  return "?";
}

LearnedClass learned_class(const Instance& inst, const Path& path) {
  if (path.empty()) throw ModelError("EMPTY path has no learned class");
  auto hop = path.next_hop();
  if (!hop) {
    if (inst.destination() && path.head() == *inst.destination()) {
      return LearnedClass::kOrigin;
    }
    throw ModelError("single-node path " + inst.render(path) +
                     " is not the origin route");
  }
  auto rel = inst.relation(path.head(), *hop);
  if (!rel) {
    throw ModelError("path " + inst.render(path) + " starts with a non-edge");
  }
  switch (*rel) {
    case Relation::kCustomer:
      return LearnedClass::kCustomer;
    case Relation::kPeer:
      return LearnedClass::kPeer;
    case Relation::kProvider:
      return LearnedClass::kProvider;
  }
  return LearnedClass::kProvider;
}

namespace {

void require_export_args(const Instance& inst, NodeIndex exporter,
                         NodeIndex neighbor, const Path& path) {
  if (!inst.adjacent(exporter, neighbor)) {
    throw ModelError("cannot export from " + inst.name(exporter) + " to " +
                     inst.name(neighbor) + ": not adjacent");
  }
  if (!path.empty() && path.head() != exporter) {
    throw ModelError("path " + inst.render(path) + " does not start at " +
                     inst.name(exporter));
  }
}

bool gao_rexford(const Instance& inst, NodeIndex exporter, NodeIndex neighbor,
                 const Path& path) {
  if (path.empty()) return false;
  if (inst.relation(exporter, neighbor) == Relation::kCustomer) return true;
  auto cls = learned_class(inst, path);
  return cls == LearnedClass::kCustomer || cls == LearnedClass::kOrigin;
}

}  // namespace

bool is_exportable_gao_rexford(const Instance& inst, NodeIndex exporter,
                               NodeIndex neighbor, const Path& path) {
  require_export_args(inst, exporter, neighbor, path);
  return gao_rexford(inst, exporter, neighbor, path);
}

bool is_exportable(const Instance& inst, NodeIndex exporter, NodeIndex neighbor,
                   const Path& path) {
  require_export_args(inst, exporter, neighbor, path);
  if (path.empty()) return false;
  const auto* rules = std::get_if<ExplicitExport>(&inst.export_policy());
  if (!rules) return gao_rexford(inst, exporter, neighbor, path);

  for (const auto& rule : rules->rules) {
    if (rule.from != exporter || rule.to != neighbor) continue;
    bool hit = false;
    if (const auto* cls = std::get_if<LearnedClass>(&rule.match)) {
      hit = learned_class(inst, path) == *cls;
    } else {
      hit = std::get<Path>(rule.match) == path;
    }
    if (hit) return rule.action == ExportRule::Action::kAllow;
  }
  return false;
}

ConditionReport check_topology_condition(const Instance& inst) {
  ConditionReport report;
  report.condition = Condition::kTopology;
  const std::size_t n = inst.node_count();

  // Walk customer -> provider edges; a back edge closes a cycle.
  enum class Color { kWhite, kGrey, kBlack };
  std::vector<Color> color(n, Color::kWhite);
  std::vector<NodeIndex> stack;

  auto providers = [&](NodeIndex u) {
    std::vector<NodeIndex> out;
    for (NodeIndex v : inst.neighbors(u)) {
      if (inst.relation(u, v) == Relation::kProvider) out.push_back(v);
    }
    return out;
  };

  std::vector<NodeIndex> cycle;
  auto dfs = [&](auto&& self, NodeIndex u) -> bool {
    color[u] = Color::kGrey;
    stack.push_back(u);
    for (NodeIndex p : providers(u)) {
      if (color[p] == Color::kGrey) {
        auto start = std::find(stack.begin(), stack.end(), p);
        cycle.assign(start, stack.end());
        return true;
      }
      if (color[p] == Color::kWhite && self(self, p)) return true;
    }
    stack.pop_back();
    color[u] = Color::kBlack;
    return false;
  };

  for (std::size_t u = 0; u < n && cycle.empty(); ++u) {
    if (color[u] == Color::kWhite) dfs(dfs, static_cast<NodeIndex>(u));
  }
  if (!cycle.empty()) {
    std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()),
                cycle.end());
    std::string text;
    for (NodeIndex c : cycle) text += inst.name(c) + " ";
    report.pass = false;
    report.witnesses.push_back(
        {cycle, {}, "customer-provider cycle: " + text + "(each a customer of the next)"});
  }
  return report;
}

ConditionReport check_gr_preference(const Instance& inst) {
  if (inst.mode() == Mode::kNeighborSpecific) {
    throw ModelError("gr-preference is defined for single-ranking modes only");
  }
  ConditionReport report;
  report.condition = Condition::kGrPreference;
  for (const auto& [key, ranking] : inst.rankings()) {
    if (key.neighbor) continue;
    const auto& paths = ranking.acceptable();
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (learned_class(inst, paths[i]) == LearnedClass::kCustomer) continue;
      for (std::size_t j = i + 1; j < paths.size(); ++j) {
        if (learned_class(inst, paths[j]) != LearnedClass::kCustomer) continue;
        report.pass = false;
        report.witnesses.push_back(
            {{key.owner},
             {paths[j], paths[i]},
             inst.name(key.owner) + " ranks " + inst.render(paths[i]) +
                 " above customer-learned " + inst.render(paths[j])});
      }
    }
  }
  return report;
}

ConditionReport check_export_condition(const Instance& inst) {
  ConditionReport report;
  report.condition = Condition::kExport;
  auto flag = [&](NodeIndex u, NodeIndex v, const Path& p) {
    report.pass = false;
    report.witnesses.push_back(
        {{u, v},
         {p},
         inst.name(u) + " may announce " + inst.render(p) + " to " +
             std::string(to_string(*inst.relation(u, v))) + " " + inst.name(v)});
  };

  const std::size_t n = inst.node_count();
  for (std::size_t ui = 0; ui < n; ++ui) {
    auto u = static_cast<NodeIndex>(ui);
    if (inst.destination() && u == *inst.destination()) continue;
    for (NodeIndex v : inst.neighbors(u)) {
      if (inst.relation(u, v) == Relation::kCustomer) continue;
      if (inst.mode() == Mode::kNeighborSpecific) {
        const auto* ranking = inst.neighbor_ranking(u, v);
        if (!ranking) continue;
        for (const auto& p : ranking->acceptable()) {
          if (!gao_rexford(inst, u, v, p)) flag(u, v, p);
        }
      } else {
        const auto* ranking = inst.node_ranking(u);
        if (!ranking) continue;
        for (const auto& p : ranking->acceptable()) {
          if (is_exportable(inst, u, v, p) && !gao_rexford(inst, u, v, p)) {
            flag(u, v, p);
          }
        }
      }
    }
  }
  return report;
}

ConditionReport check_nsbgp_safety(const Instance& inst) {
  if (inst.mode() != Mode::kNeighborSpecific) {
    throw ModelError("nsbgp-safety is defined for neighbor-specific mode only");
  }
  ConditionReport report;
  report.condition = Condition::kNsbgpSafety;
  report.parts.push_back(check_topology_condition(inst));
  report.parts.push_back(check_export_condition(inst));
  for (const auto& part : report.parts) {
    report.pass = report.pass && part.pass;
    report.witnesses.insert(report.witnesses.end(), part.witnesses.begin(),
                            part.witnesses.end());
  }
  return report;
}

bool witness_fails(const Instance& inst, Condition condition,
                   const Witness& w) {
  switch (condition) {
    case Condition::kTopology: {
      if (w.nodes.size() < 2) return false;
      for (std::size_t i = 0; i < w.nodes.size(); ++i) {
        auto next = w.nodes[(i + 1) % w.nodes.size()];
        if (inst.relation(w.nodes[i], next) != Relation::kProvider) return false;
      }
      return true;
    }
    case Condition::kGrPreference: {
      if (w.nodes.size() != 1 || w.paths.size() != 2) return false;
      const auto* ranking = inst.node_ranking(w.nodes[0]);
      if (!ranking) return false;
      auto customer_rank = ranking->rank(w.paths[0]);
      auto other_rank = ranking->rank(w.paths[1]);
      return customer_rank && other_rank && !w.paths[0].empty() &&
             !w.paths[1].empty() &&
             learned_class(inst, w.paths[0]) == LearnedClass::kCustomer &&
             learned_class(inst, w.paths[1]) != LearnedClass::kCustomer &&
             *other_rank < *customer_rank;
    }
    case Condition::kExport: {
      if (w.nodes.size() != 2 || w.paths.size() != 1) return false;
      auto rel = inst.relation(w.nodes[0], w.nodes[1]);
      return rel && *rel != Relation::kCustomer &&
             !gao_rexford(inst, w.nodes[0], w.nodes[1], w.paths[0]);
    }
    case Condition::kNsbgpSafety:
      return witness_fails(inst, Condition::kTopology, w) ||
             witness_fails(inst, Condition::kExport, w);
  }
  return false;
}

}  // namespace nsbgp
