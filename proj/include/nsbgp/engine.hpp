#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nsbgp/model.hpp"
#include "nsbgp/rng.hpp"
#include "nsbgp/state.hpp"

namespace nsbgp {

struct RoundRobin {
  std::vector<NodeIndex> order;  // empty: every node in index order
};
struct ExplicitSequence {
  std::vector<NodeIndex> sequence;  // repeated forever
};
struct RandomFair {
  std::uint64_t seed = 0;
  std::size_t fairness_window = 0;  // 0: 2 * |nodes|
};
using Schedule = std::variant<RoundRobin, ExplicitSequence, RandomFair>;

/// Activation stream for a schedule. Periodic schedules expose their
/// position within the period; random ones report position 0.
class ScheduleCursor {
 public:
  ScheduleCursor(const Instance& instance, const Schedule& schedule);

  NodeIndex next();
  std::size_t position() const { return position_; }
  bool periodic() const { return periodic_; }
  std::size_t fairness_window() const { return window_; }

 private:
  bool periodic_ = true;
  std::vector<NodeIndex> period_;
  std::size_t position_ = 0;

  // Random fair stream: earliest-deadline fallback keeps every node's gap
  // below the window.
  Rng rng_{0};
  std::size_t window_ = 0;
  std::size_t step_ = 0;
  std::vector<std::size_t> deadline_;  // last step each node may wait until
};

/// Standard initial state: every rib_in EMPTY except the destination,
/// which already announces (d) wherever its export policy allows.
ProtocolState initial_state(const Instance& instance);

/// Routes u could use now: each neighbor's current announcement extended by
/// u (looping ones dropped), plus EMPTY. Sorted.
std::vector<Path> candidates(const Instance& instance,
                             const ProtocolState& state, NodeIndex u);

/// One atomic activation of u under the instance's selection mode.
/// Throws ModelError if a ranking the mode needs is missing.
ProtocolState activate(const Instance& instance, const ProtocolState& state,
                       NodeIndex u);

bool is_stable(const Instance& instance, const ProtocolState& state);

struct Converged {
  ProtocolState state;
  std::size_t steps = 0;
};
struct Cycle {
  std::vector<ProtocolState> states;  // pairwise distinct, in order
  std::vector<NodeIndex> activations;  // activations[i] moves states[i] on
  std::size_t entry_step = 0;          // step after which states[0] appeared
};
struct Inconclusive {
  std::size_t steps = 0;
};
using Outcome = std::variant<Converged, Cycle, Inconclusive>;

struct TraceStep {
  std::size_t step = 0;  // 1-based
  NodeIndex activated = 0;
  ProtocolState state;
  std::vector<bool> changed;  // per node
};

struct RunOptions {
  std::size_t max_steps = 0;  // 0: 1000 * |nodes|
  std::optional<ProtocolState> initial;
};

Outcome run(const Instance& instance, const Schedule& schedule,
            const RunOptions& options = {});
std::vector<TraceStep> trace(const Instance& instance, const Schedule& schedule,
                             const RunOptions& options = {});

/// "((1 3 d), (2 d), (3 d))": own selections of every non-destination
/// node in index order. Changed nodes are wrapped in underscores when
/// `changed` is given.
std::string render_selections(const Instance& instance,
                              const ProtocolState& state,
                              const std::vector<bool>* changed = nullptr);

/// One JSON object per line describing a trace step.
std::string render_trace_record(const Instance& instance, const TraceStep& step);

}  // namespace nsbgp
