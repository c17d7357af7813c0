#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "nsbgp/model.hpp"

// Single-AS deployment model: internal routers, IGP distances, how
// interdomain routes are disseminated inside the AS, and how each ingress
// link is assigned an egress.
namespace nsbgp::intra_as {

using RouterId = std::string;
using LinkId = std::string;
/// External AS path as announced by the neighbor, e.g. {"Peer2", "d"}.
using AsPath = std::vector<std::string>;

class AsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExternalLink {
  LinkId id;
  RouterId router;       // local edge router
  std::string neighbor;  // external AS
  Relation relationship = Relation::kPeer;  // what the neighbor is to us

  bool operator==(const ExternalLink&) const = default;
};

struct IgpEdge {
  RouterId a;
  RouterId b;
  double cost = 1;

  bool operator==(const IgpEdge&) const = default;
};

/// Route offered at an egress link.
struct Route {
  LinkId link;
  AsPath path;

  auto operator<=>(const Route&) const = default;
};

/// Attributes compared before the hot-potato tie-break. Routes with equal
/// keys are "equally good".
struct Classifier {
  std::map<Relation, int> relationship_rank{
      {Relation::kCustomer, 0}, {Relation::kPeer, 1}, {Relation::kProvider, 2}};
  bool path_length = true;

  bool operator==(const Classifier&) const = default;
};

struct SingleBest {
  bool operator==(const SingleBest&) const = default;
};
struct RouteReflector {
  std::set<RouterId> reflectors;
  std::map<RouterId, std::set<RouterId>> clients;  // reflector -> clients
  bool operator==(const RouteReflector&) const = default;
};
struct AddPaths {
  std::size_t k = 2;
  bool operator==(const AddPaths&) const = default;
};
/// Best route of each export class: best overall and best customer-learned.
struct ClassBest {
  bool operator==(const ClassBest&) const = default;
};
struct RcpFull {
  bool operator==(const RcpFull&) const = default;
};
using Dissemination =
    std::variant<SingleBest, RouteReflector, AddPaths, ClassBest, RcpFull>;

std::string describe(const Dissemination& mode);

struct AsConfig {
  std::string name = "AS";
  std::string destination = "d";
  std::vector<RouterId> routers;
  std::vector<IgpEdge> igp;
  /// Internal sessions; empty means full mesh. Ignored by route reflection
  /// (sessions follow the reflector topology) and RCP.
  std::vector<std::pair<RouterId, RouterId>> sessions;
  std::vector<ExternalLink> external_links;
  std::map<LinkId, AsPath> offers;
  Dissemination dissemination = SingleBest{};
  Classifier classifier;

  bool operator==(const AsConfig&) const = default;
};

/// Validated, indexed AS model. Throws AsError on construction when the
/// IGP graph is disconnected, a cost is not positive, link ids repeat, or
/// an offer references an unknown link.
class AsInternal {
 public:
  explicit AsInternal(AsConfig config);

  const AsConfig& config() const { return config_; }
  const std::vector<RouterId>& routers() const { return config_.routers; }
  const ExternalLink& link(const LinkId& id) const;
  std::vector<const ExternalLink*> links_of(const std::string& neighbor) const;

  /// Shortest IGP cost between routers.
  double distance(const RouterId& from, const RouterId& to) const;
  const RouterId& egress_router(const Route& route) const {
    return link(route.link).router;
  }

  /// Equivalence key of a route under the classifier (lower is better).
  std::pair<int, std::size_t> class_key(const Route& route) const;
  /// Total order used by a router: class key, IGP distance, link id.
  std::tuple<int, std::size_t, double, LinkId> preference_key(
      const RouterId& router, const Route& route) const;

  /// Whether a route may be announced over `ingress` (Gao-Rexford export
  /// classes; routes through the ingress neighbor are never offered back).
  bool exportable(const Route& route, const ExternalLink& ingress) const;

  std::vector<Route> all_offers() const;
  std::vector<std::pair<RouterId, RouterId>> session_pairs() const;

 private:
  std::size_t router_index(const RouterId& id) const;

  AsConfig config_;
  std::map<RouterId, std::size_t> router_index_;
  std::map<LinkId, std::size_t> link_index_;
  std::vector<std::vector<double>> dist_;
};

struct Visibility {
  std::map<RouterId, std::vector<Route>> visible;    // sorted by link id
  std::map<RouterId, std::vector<Route>> announced;  // internal announcements
};

/// Fixed point of internal dissemination under the configured mode.
Visibility disseminate(const AsInternal& as);
std::vector<Route> visible_routes(const AsInternal& as, const RouterId& router);

/// Top classifier class, then lowest IGP distance, then smallest link id.
/// Throws AsError if `offers` is empty.
Route hot_potato_select(const AsInternal& as, const RouterId& router,
                        const std::vector<Route>& offers);

enum class SelectionMode { kConventional, kFilterFirst };

struct SelectionOptions {
  /// Only evaluate ingress links to neighbors of this class.
  std::optional<Relation> neighbor_class;
  /// CONVENTIONAL only: force a router's single best route to the offer of
  /// the given egress link (when visible there).
  std::map<RouterId, LinkId> pinned_best;
};

/// Route assigned to each external link acting as ingress; nullopt means
/// nothing is announced over that link.
using Selection = std::map<LinkId, std::optional<Route>>;

Selection egress_selection(const AsInternal& as, SelectionMode mode,
                           const SelectionOptions& options = {});

/// Per-ingress-link preference lists over egress links (customized
/// selection). Links without a list fall back to filter-first selection.
Selection customized_selection(
    const AsInternal& as,
    const std::map<LinkId, std::vector<LinkId>>& preferences);

struct CheckResult {
  bool pass = true;
  std::vector<LinkId> offending;
  std::string explanation;
};

/// Every link to `neighbor` announces a route and all announced routes are
/// equally good. Throws AsError when the neighbor has fewer than two links.
CheckResult check_consistent_export(const AsInternal& as,
                                    const std::string& neighbor,
                                    const Selection& selection);

/// Every assigned route is the IGP-closest among the top class of routes
/// exportable over that ingress link.
CheckResult check_hot_potato(const AsInternal& as, const Selection& selection);

struct TunnelEntry {
  LinkId egress_link;
  RouterId egress_router;
  bool pop_before_next_hop = true;  // header removed at the egress router

  bool operator==(const TunnelEntry&) const = default;
};
struct TunnelTable {
  std::map<LinkId, TunnelEntry> entries;  // ingress link -> egress
};

TunnelTable assign_tunnels(const AsInternal& as, const Selection& selection);

/// Routes each router carries per destination in its internal
/// announcements. Under RCP every router is handed every offer.
std::map<RouterId, std::size_t> dissemination_overhead(const AsInternal& as);

}  // namespace nsbgp::intra_as
