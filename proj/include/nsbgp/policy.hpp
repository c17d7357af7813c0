#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nsbgp/model.hpp"

namespace nsbgp {

/// Class of the route `path` as seen by its head node: origin for the
/// destination's trivial route, otherwise the relation of the next hop.
/// Throws ModelError for EMPTY paths or non-adjacent next hops.
LearnedClass learned_class(const Instance& instance, const Path& path);

/// Export decision under the instance's configured policy.
/// Throws ModelError if exporter and neighbor are not adjacent, or if a
/// non-EMPTY path does not start at the exporter.
bool is_exportable(const Instance& instance, NodeIndex exporter,
                   NodeIndex neighbor, const Path& path);

/// Export decision under the Gao-Rexford default regardless of the
/// configured policy: customers get everything, everyone else gets
/// customer-learned routes and the origin route only.
bool is_exportable_gao_rexford(const Instance& instance, NodeIndex exporter,
                               NodeIndex neighbor, const Path& path);

enum class Condition { kExport, kTopology, kGrPreference, kNsbgpSafety };

std::string_view to_string(Condition condition);

struct Witness {
  std::vector<NodeIndex> nodes;
  std::vector<Path> paths;
  std::string explanation;
};

struct ConditionReport {
  Condition condition = Condition::kTopology;
  bool pass = true;
  std::vector<Witness> witnesses;
  std::vector<ConditionReport> parts;  // sub-reports of aggregate checks
};

/// Passes iff the provider->customer digraph is acyclic. The witness lists
/// one cycle as [c0, c1, ...] where each c_i is a customer of c_{i+1}
/// (wrapping around).
ConditionReport check_topology_condition(const Instance& instance);

/// Customer-learned paths must outrank peer/provider-learned ones in every
/// λ^u. Only defined for CONVENTIONAL and FILTER_FIRST (throws otherwise).
/// Witness: nodes {u}, paths {customer_path, other_path}.
ConditionReport check_gr_preference(const Instance& instance);

/// Static check that nothing a node can announce to a peer or provider is
/// outside the Gao-Rexford export rule. Witness: nodes {u, v}, paths {p}.
ConditionReport check_export_condition(const Instance& instance);

/// Topology + export conditions; NEIGHBOR_SPECIFIC only (throws otherwise).
ConditionReport check_nsbgp_safety(const Instance& instance);

/// Re-evaluates one witness in isolation; true iff it still demonstrates a
/// violation of `condition`.
bool witness_fails(const Instance& instance, Condition condition,
                   const Witness& witness);

}  // namespace nsbgp
