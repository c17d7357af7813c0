#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "nsbgp/intra_as.hpp"
#include "nsbgp/model.hpp"
#include "nsbgp/service_models.hpp"
#include "nsbgp/state.hpp"

// Canonical instances and seeded random generators.
namespace nsbgp::scenarios {

/// Three nodes around d, each preferring the route through its clockwise
/// neighbor: λ1 = [(1 3 d), (1 d)], λ2 = [(2 1 d), (2 d)],
/// λ3 = [(3 2 d), (3 d)]. Relationships: d is a customer of 1, 2 and 3;
/// 3 is a customer of 1 and 2; 1 and 2 peer. Only "1 and 2 are providers of
/// 3" is given by the original gadget; the rest is a reconstruction chosen
/// so that every preferred route is exportable under Gao-Rexford.
Instance bad_gadget(Mode mode = Mode::kConventional);

/// State in which every neighbor of the destination uses its direct route
/// (x d) and exports it wherever policy allows; everything else is EMPTY.
/// In Bad Gadget this is the oscillation's ((1 d), (2 d), (3 d)) point,
/// which the standard initial state cannot reach.
ProtocolState direct_route_state(const Instance& instance);

/// Node 1 with three routes to d via 5, 6 and 7 and customers 2, 3, 4, using
/// one ranking for everybody.
Instance fig3_gadget();
/// Same topology in NEIGHBOR_SPECIFIC mode: customers 2, 3 and 4 are each
/// offered a different top route.
Instance fig4_gadget();
/// Attribute records for node 1's routes in fig3/fig4.
PathAttributes fig4_attributes(const Instance& instance);
/// 2: shortest path, 3: most secure, 4: least expensive.
std::map<NodeIndex, ServiceModel> fig4_assignments(const Instance& instance);

/// Four routers; r1 = (Customer2 d) at R3 and r2 = (Peer2 d) at R4 are
/// equally good; Peer1 attaches at R1 and R2, Customer1 at R2.
intra_as::AsConfig fig1_config();
intra_as::AsInternal fig1_gadget();
/// Forces R2's single best route to r1.
intra_as::SelectionOptions fig1_forced_r1();

/// R3 and R4 are egress routers with two offers each, R5 is the core, R1
/// and R2 are ingress routers for customers C1, C2 and C3.
intra_as::AsConfig fig5_config();
intra_as::AsInternal fig5_as();
/// C1 wants the route through R6, C2 the one through R7.
std::map<intra_as::LinkId, std::vector<intra_as::LinkId>> fig5_customization();

struct GeneratorConfig {
  /// Keep every sufficient safety condition for the chosen mode.
  bool safe = true;
  /// NEIGHBOR_SPECIFIC only: rank a non-exportable route for a peer or
  /// provider.
  bool inject_export_violation = false;
  /// CONVENTIONAL / FILTER_FIRST only: wire nodes 1-3 as a Bad Gadget.
  bool inject_gadget = false;
  double provider_probability = 0.3;
  double peer_probability = 0.2;
  std::size_t min_paths = 5;
  std::size_t max_paths = 10;
};

/// Deterministic per (seed, n_nodes, mode, config). n_nodes counts the
/// destination "d"; the other nodes are named "1".."n-1". The
/// customer-provider graph is acyclic by construction. Throws ModelError on
/// contradictory configs.
Instance random_instance(std::uint64_t seed, std::size_t n_nodes, Mode mode,
                         const GeneratorConfig& config = {});

/// Attribute record for every path listed in any ranking. hop_count is the
/// AS-path length.
PathAttributes random_attributes(std::uint64_t seed, const Instance& instance);

}  // namespace nsbgp::scenarios
