#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "nsbgp/engine.hpp"
#include "nsbgp/model.hpp"
#include "nsbgp/oracle.hpp"

namespace nsbgp {

inline void PrintTo(const Path& path, std::ostream* os) {
  *os << "(";
  for (std::size_t i = 0; i < path.size(); ++i) *os << (i ? " " : "") << path.nodes()[i];
  *os << ")";
}

}  // namespace nsbgp

namespace nsbgp::testing {

inline Path path_of(const Instance& inst, std::initializer_list<const char*> names) {
  std::vector<NodeIndex> nodes;
  for (const char* n : names) nodes.push_back(inst.index(n));
  return Path(std::move(nodes));
}

inline NodeIndex node(const Instance& inst, const char* name) { return inst.index(name); }

/// Drives the engine along an oracle witness: the prefix from the initial
/// state, then the cycle schedule repeated. True iff the engine reports a
/// cycle over exactly the witness states.
inline bool witness_replays(const Instance& inst, const oracle::CycleWitness& w) {
  auto state = initial_state(inst);
  for (NodeIndex u : w.prefix) state = activate(inst, state, u);
  if (w.states.empty() || state != w.states.front()) return false;
  RunOptions options;
  options.initial = state;
  options.max_steps = 4 * w.schedule.size() + 4;
  const auto out = run(inst, ExplicitSequence{w.schedule}, options);
  const auto* cycle = std::get_if<Cycle>(&out);
  if (!cycle) return false;
  auto want = w.states;
  auto got = cycle->states;
  std::sort(want.begin(), want.end());
  want.erase(std::unique(want.begin(), want.end()), want.end());
  std::sort(got.begin(), got.end());
  return want == got;
}

}  // namespace nsbgp::testing
