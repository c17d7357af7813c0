#include "nsbgp/engine.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include <json.hpp>

#include "nsbgp/policy.hpp"

namespace nsbgp {

namespace {

std::vector<NodeIndex> all_nodes(const Instance& inst) {
  std::vector<NodeIndex> out(inst.node_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<NodeIndex>(i);
  return out;
}

void check_nodes(const Instance& inst, const std::vector<NodeIndex>& nodes) {
  for (NodeIndex u : nodes) {
    if (u >= inst.node_count()) throw ModelError("schedule names an unknown node");
  }
}

}  // namespace

ScheduleCursor::ScheduleCursor(const Instance& inst, const Schedule& schedule) {
  if (const auto* rr = std::get_if<RoundRobin>(&schedule)) {
    period_ = rr->order.empty() ? all_nodes(inst) : rr->order;
  } else if (const auto* seq = std::get_if<ExplicitSequence>(&schedule)) {
    period_ = seq->sequence;
  } else {
    const auto& random = std::get<RandomFair>(schedule);
    const std::size_t n = inst.node_count();
    periodic_ = false;
    rng_ = Rng(random.seed);
    window_ = random.fairness_window ? random.fairness_window : 2 * n;
    if (n == 0) throw ModelError("cannot schedule an empty instance");
    if (window_ < n) {
      throw ModelError("fairness window " + std::to_string(window_) +
                       " is shorter than the node count");
    }
    deadline_.assign(n, window_ - 1);
    return;
  }
  if (period_.empty()) throw ModelError("schedule is empty");
  check_nodes(inst, period_);
}

NodeIndex ScheduleCursor::next() {
  if (periodic_) {
    NodeIndex u = period_[position_];
    position_ = (position_ + 1) % period_.size();
    return u;
  }
  const std::size_t n = deadline_.size();
  auto feasible_after = [&](std::size_t chosen) {
    std::vector<std::size_t> d = deadline_;
    d[chosen] = step_ + window_;
    std::sort(d.begin(), d.end());
    for (std::size_t j = 0; j < n; ++j) {
      if (d[j] < step_ + 1 + j) return false;
    }
    return true;
  };
  auto pick = static_cast<std::size_t>(rng_.below(n));
  if (!feasible_after(pick)) {
    pick = static_cast<std::size_t>(
        std::min_element(deadline_.begin(), deadline_.end()) - deadline_.begin());
  }
  deadline_[pick] = step_ + window_;
  ++step_;
  return static_cast<NodeIndex>(pick);
}

ProtocolState initial_state(const Instance& inst) {
  ProtocolState state(inst);
  const NodeIndex d = inst.dest();
  const Path origin{d};
  state.node(d).own = origin;
  for (NodeIndex v : inst.neighbors(d)) {
    if (is_exportable(inst, d, v, origin)) state.set_exported(inst, d, v, origin);
  }
  return state;
}

std::vector<Path> candidates(const Instance& inst, const ProtocolState& state,
                             NodeIndex u) {
  std::vector<Path> out{Path{}};
  for (NodeIndex v : inst.neighbors(u)) {
    if (auto extended = extend(state.rib_in(inst, u, v), u)) {
      out.push_back(std::move(*extended));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

const RankingFunction& require(const RankingFunction* ranking,
                               const Instance& inst, NodeIndex owner,
                               std::optional<NodeIndex> neighbor) {
  if (!ranking) {
    std::string what = "missing ranking for " + inst.name(owner);
    if (neighbor) what += "->" + inst.name(*neighbor);
    throw ModelError(what);
  }
  return *ranking;
}

/// Most preferred acceptable path among `options`; EMPTY if none.
template <typename Filter>
Path best_of(const RankingFunction& ranking, const std::vector<Path>& options,
             Filter&& allowed) {
  Path best;
  std::size_t best_rank = ranking.acceptable().size();
  for (const auto& p : options) {
    if (p.empty() || !allowed(p)) continue;
    auto r = ranking.rank(p);
    if (r && *r < best_rank) {
      best_rank = *r;
      best = p;
    }
  }
  return best;
}

}  // namespace

ProtocolState activate(const Instance& inst, const ProtocolState& state,
                       NodeIndex u) {
  ProtocolState out = state;
  NodeState& node = out.node(u);
  const auto neighbors = inst.neighbors(u);
  const NodeIndex d = inst.dest();

  if (u == d) {
    const Path origin{d};
    node.own = origin;
    for (std::size_t s = 0; s < neighbors.size(); ++s) {
      node.exported[s] =
          is_exportable(inst, d, neighbors[s], origin) ? origin : Path{};
    }
    return out;
  }

  const auto options = candidates(inst, state, u);
  auto any = [](const Path&) { return true; };

  switch (inst.mode()) {
    case Mode::kConventional: {
      const auto& ranking = require(inst.node_ranking(u), inst, u, std::nullopt);
      Path best = best_of(ranking, options, any);
      for (std::size_t s = 0; s < neighbors.size(); ++s) {
        const bool ok = !best.empty() && is_exportable(inst, u, neighbors[s], best);
        node.exported[s] = ok ? best : Path{};
      }
      node.own = std::move(best);
      break;
    }
    case Mode::kFilterFirst: {
      const auto& ranking = require(inst.node_ranking(u), inst, u, std::nullopt);
      for (std::size_t s = 0; s < neighbors.size(); ++s) {
        const NodeIndex v = neighbors[s];
        node.exported[s] = best_of(ranking, options, [&](const Path& p) {
          return is_exportable(inst, u, v, p);
        });
      }
      node.own = best_of(ranking, options, any);
      break;
    }
    case Mode::kNeighborSpecific: {
      for (std::size_t s = 0; s < neighbors.size(); ++s) {
        const NodeIndex v = neighbors[s];
        const auto& ranking = require(inst.neighbor_ranking(u, v), inst, u, v);
        node.exported[s] = best_of(ranking, options, [&](const Path& p) {
          return is_exportable(inst, u, v, p);
        });
      }
      const auto& self = require(inst.node_ranking(u), inst, u, std::nullopt);
      node.own = best_of(self, options, any);
      break;
    }
  }
  return out;
}

bool is_stable(const Instance& inst, const ProtocolState& state) {
  for (std::size_t u = 0; u < inst.node_count(); ++u) {
    auto node = static_cast<NodeIndex>(u);
    if (activate(inst, state, node).node(node) != state.node(node)) return false;
  }
  return true;
}

namespace {

struct Execution {
  Outcome outcome;
  std::vector<TraceStep> steps;
};

/// Shortest closed run of distinct states at the start of the periodic
/// segment history[from..], ignoring activations that changed nothing.
Cycle extract_cycle(const std::vector<ProtocolState>& history,
                    const std::vector<NodeIndex>& activations,
                    std::size_t from) {
  struct Visit {
    std::size_t step;
    NodeIndex via;  // activation that left this state
  };
  std::vector<Visit> compressed{{from, 0}};
  std::unordered_map<ProtocolState, std::size_t, ProtocolStateHash> index;
  index.emplace(history[from], 0);

  for (std::size_t k = from + 1; k < history.size(); ++k) {
    if (history[k] == history[k - 1]) continue;
    compressed.back().via = activations[k - 1];
    auto [it, fresh] = index.emplace(history[k], compressed.size());
    if (!fresh) {
      Cycle cycle;
      cycle.entry_step = compressed[it->second].step;
      for (std::size_t c = it->second; c < compressed.size(); ++c) {
        cycle.states.push_back(history[compressed[c].step]);
        cycle.activations.push_back(compressed[c].via);
      }
      return cycle;
    }
    compressed.push_back({k, 0});
  }
  // Every activation in the segment was a no-op.
  return Cycle{{history[from]}, {}, from};
}

Execution execute(const Instance& inst, const Schedule& schedule,
                  const RunOptions& options, bool record) {
  const std::size_t n = inst.node_count();
  const std::size_t max_steps = options.max_steps ? options.max_steps : 1000 * n;
  ScheduleCursor cursor(inst, schedule);

  std::vector<ProtocolState> history{options.initial ? *options.initial
                                                     : initial_state(inst)};
  std::vector<NodeIndex> activations;
  Execution result{Inconclusive{max_steps}, {}};

  using Key = std::pair<std::size_t, std::size_t>;  // (position, step)
  std::unordered_map<ProtocolState, std::vector<Key>, ProtocolStateHash> seen;
  seen[history.back()].push_back({cursor.position(), 0});
  std::vector<std::size_t> last_activation(n, 0);
  std::vector<bool> activated(n, false);

  for (std::size_t step = 1; step <= max_steps; ++step) {
    const NodeIndex u = cursor.next();
    ProtocolState next = activate(inst, history.back(), u);
    if (record) {
      std::vector<bool> changed(n, false);
      changed[u] = next.node(u) != history.back().node(u);
      result.steps.push_back({step, u, next, std::move(changed)});
    }
    history.push_back(std::move(next));
    activations.push_back(u);
    last_activation[u] = step;
    activated[u] = true;
    const ProtocolState& current = history.back();

    if (is_stable(inst, current)) {
      result.outcome = Converged{current, step};
      return result;
    }

    auto& occurrences = seen[current];
    if (cursor.periodic()) {
      for (const auto& [position, at] : occurrences) {
        if (position == cursor.position()) {
          result.outcome = extract_cycle(history, activations, at);
          return result;
        }
      }
    } else {
      // Repeating the segment since an earlier visit is a fair oscillation
      // only if every node was activated inside it.
      for (const auto& [unused, at] : occurrences) {
        bool everyone = true;
        for (std::size_t v = 0; v < n && everyone; ++v) {
          everyone = activated[v] && last_activation[v] > at;
        }
        if (everyone) {
          result.outcome = extract_cycle(history, activations, at);
          return result;
        }
      }
    }
    occurrences.push_back({cursor.position(), step});
  }
  return result;
}

}  // namespace

Outcome run(const Instance& inst, const Schedule& schedule,
            const RunOptions& options) {
  return execute(inst, schedule, options, false).outcome;
}

std::vector<TraceStep> trace(const Instance& inst, const Schedule& schedule,
                             const RunOptions& options) {
  return execute(inst, schedule, options, true).steps;
}

std::string render_selections(const Instance& inst, const ProtocolState& state,
                              const std::vector<bool>* changed) {
  std::string out = "(";
  bool first = true;
  for (std::size_t u = 0; u < inst.node_count(); ++u) {
    auto node = static_cast<NodeIndex>(u);
    if (inst.destination() && node == *inst.destination()) continue;
    if (!first) out += ", ";
    first = false;
    const bool mark = changed && (*changed)[u];
    if (mark) out += '_';
    out += inst.render(state.own(node));
    if (mark) out += '_';
  }
  out += ')';
  return out;
}

std::string render_trace_record(const Instance& inst, const TraceStep& step) {
  auto names = [&](const Path& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (NodeIndex n : p.nodes()) arr.push_back(inst.name(n));
    return arr;
  };
  nlohmann::json record;
  record["step"] = step.step;
  record["node"] = inst.name(step.activated);
  nlohmann::json own = nlohmann::json::object();
  nlohmann::json exported = nlohmann::json::object();
  nlohmann::json changed = nlohmann::json::array();
  for (std::size_t u = 0; u < inst.node_count(); ++u) {
    auto node = static_cast<NodeIndex>(u);
    own[inst.name(node)] = names(step.state.own(node));
    for (NodeIndex v : inst.neighbors(node)) {
      exported[inst.name(node) + "->" + inst.name(v)] =
          names(step.state.exported(inst, node, v));
    }
    if (step.changed[u]) changed.push_back(inst.name(node));
  }
  record["own"] = std::move(own);
  record["exported"] = std::move(exported);
  record["changed"] = std::move(changed);
  record["selections"] = render_selections(inst, step.state, &step.changed);
  return record.dump();
}

}  // namespace nsbgp
