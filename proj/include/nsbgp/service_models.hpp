#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nsbgp/model.hpp"

// Per-neighbor ranking construction for the subscription, total-control and
// hybrid ways of selling customized routes.
namespace nsbgp {

enum class Attribute { kLatency, kSecurity, kCost, kHops };

std::string_view to_string(Attribute attribute);
Attribute parse_attribute(std::string_view text);

struct PathMetrics {
  double latency_ms = 0;
  double security_score = 0;  // 0..1, higher is safer
  double monetary_cost = 0;
  int hop_count = 1;

  /// Raw value of one attribute.
  double raw(Attribute attribute) const;
  bool operator==(const PathMetrics&) const = default;
};

using PathAttributes = std::map<Path, PathMetrics>;

enum class MenuItem { kShortestPath, kMostSecure, kLeastExpensive };

std::string_view to_string(MenuItem item);
MenuItem parse_menu_item(std::string_view text);

struct Subscription {
  MenuItem item = MenuItem::kShortestPath;
};
struct TotalControl {
  RankingFunction ranking;
};
struct Hybrid {
  double weight = 0.5;  // share of the neighbor's score
  std::map<Attribute, double> neighbor_weights;
  std::map<Attribute, double> as_weights;
};
using ServiceModel = std::variant<Subscription, TotalControl, Hybrid>;

/// Orders `candidates` under `model`. Ties (scores within 1e-9) fall back to
/// hop count, then the path itself. Throws ModelError for a missing
/// attribute record, a TOTAL_CONTROL ranking owned by another node, or
/// hybrid weights that are out of range or do not sum to 1.
RankingFunction build_ranking(const ServiceModel& model, NodeIndex owner,
                              NodeIndex neighbor,
                              const std::set<Path>& candidates,
                              const PathAttributes& attrs);

/// Hybrid score of every candidate, for inspection and tests.
std::map<Path, double> hybrid_scores(const Hybrid& model,
                                     const std::set<Path>& candidates,
                                     const PathAttributes& attrs);

/// NEIGHBOR_SPECIFIC copy of `instance` in which `owner` ranks routes for
/// each assigned neighbor with that neighbor's model, over the routes it may
/// export to that neighbor. Unassigned neighbors keep the owner's existing
/// preference order filtered to exportable routes. The self ranking comes
/// from `self_model` when given, otherwise it is left as configured.
Instance apply_service_models(const Instance& instance, NodeIndex owner,
                              const std::map<NodeIndex, ServiceModel>& assignments,
                              const PathAttributes& attrs,
                              const std::optional<ServiceModel>& self_model = {});

}  // namespace nsbgp
