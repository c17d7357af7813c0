#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsbgp/model.hpp"
#include "nsbgp/state.hpp"

// Brute-force ground truth for small instances. Selection rules are
// re-implemented here from their definitions rather than borrowed from the
// engine, so the two can be checked against each other.
namespace nsbgp::oracle {

inline constexpr std::uint64_t kDefaultSearchLimit = 10'000'000;
inline constexpr std::size_t kDefaultMaxStates = 1'000'000;

class SearchSpaceExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class StateBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Product over non-destination nodes of (distinct acceptable paths + 1).
std::uint64_t search_space(const Instance& instance);

/// Every stable state of the instance, sorted. Throws SearchSpaceExceeded
/// when search_space() or the number of explored partial assignments
/// exceeds `limit`.
std::vector<ProtocolState> enumerate_stable_states(
    const Instance& instance, std::uint64_t limit = kDefaultSearchLimit);

/// Oracle's own activation of u; used by exhaustive_search.
ProtocolState step(const Instance& instance, const ProtocolState& state,
                   NodeIndex u);

/// Oracle's own fixed-point test.
bool is_fixed_point(const Instance& instance, const ProtocolState& state);

struct StateGraph {
  std::vector<ProtocolState> vertices;  // vertices[0] is the initial state
  /// successors[v][u]: vertex reached by activating node u in vertices[v].
  std::vector<std::vector<std::size_t>> successors;

  /// Graphviz DOT; vertices named by state digest, edges labelled with the
  /// activated node. Self-loops are omitted.
  std::string to_dot(const Instance& instance) const;
};

struct CycleWitness {
  std::vector<NodeIndex> prefix;    // activations from the initial state
  std::vector<NodeIndex> schedule;  // activations around the cycle
  std::vector<ProtocolState> states;  // cycle states; schedule[i] moves states[i]
};

enum class Verdict { kSafe, kCycleFound };

struct SearchResult {
  StateGraph graph;
  Verdict verdict = Verdict::kSafe;
  std::optional<CycleWitness> witness;
  std::vector<std::size_t> stable_vertices;
};

/// Full reachable state graph under single-node activations from the
/// standard initial state. SAFE iff the graph has no cycle once self-loops
/// (no-op activations) are ignored. Throws StateBudgetExceeded.
SearchResult exhaustive_search(const Instance& instance,
                               std::size_t max_states = kDefaultMaxStates);

}  // namespace nsbgp::oracle
