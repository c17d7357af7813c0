#include "nsbgp/service_models.hpp"

#include <algorithm>
#include <cmath>

#include "nsbgp/policy.hpp"

namespace nsbgp {

namespace {

constexpr double kTieTolerance = 1e-9;
constexpr double kWeightTolerance = 1e-6;

bool higher_is_better(Attribute attribute) {
  return attribute == Attribute::kSecurity;
}

const PathMetrics& metrics_of(const PathAttributes& attrs, const Path& p) {
  auto it = attrs.find(p);
  if (it == attrs.end()) throw ModelError("no attribute record for a candidate path");
  return it->second;
}

/// Sorts by descending score; near-equal scores fall back to hop count and
/// then the path itself.
std::vector<Path> order_by_score(const std::map<Path, double>& score,
                                 const PathAttributes& attrs) {
  std::vector<Path> out;
  for (const auto& [p, unused] : score) out.push_back(p);
  std::sort(out.begin(), out.end(), [&](const Path& a, const Path& b) {
    const double sa = score.at(a);
    const double sb = score.at(b);
    if (std::abs(sa - sb) > kTieTolerance) return sa > sb;
    const int ha = metrics_of(attrs, a).hop_count;
    const int hb = metrics_of(attrs, b).hop_count;
    if (ha != hb) return ha < hb;
    return a < b;
  });
  return out;
}

void check_weights(const std::map<Attribute, double>& weights, double share,
                   std::string_view party) {
  double sum = 0;
  for (const auto& [attribute, w] : weights) {
    if (!(w >= 0)) {
      throw ModelError(std::string(party) + " weight for " +
                       std::string(to_string(attribute)) + " is negative");
    }
    sum += w;
  }
  if (weights.empty() && share == 0) return;
  if (std::abs(sum - 1) > kWeightTolerance) {
    throw ModelError(std::string(party) + " weights sum to " + std::to_string(sum) +
                     ", expected 1");
  }
}

}  // namespace

std::string_view to_string(Attribute attribute) {
  switch (attribute) {
    case Attribute::kLatency: return "latency_ms";
    case Attribute::kSecurity: return "security_score";
    case Attribute::kCost: return "monetary_cost";
    case Attribute::kHops: return "hop_count";
  }
  return "?";
}

Attribute parse_attribute(std::string_view text) {
  for (auto a : {Attribute::kLatency, Attribute::kSecurity, Attribute::kCost,
                 Attribute::kHops}) {
    if (text == to_string(a)) return a;
  }
  throw ModelError("unknown attribute '" + std::string(text) + "'");
}

double PathMetrics::raw(Attribute attribute) const {
  switch (attribute) {
    case Attribute::kLatency: return latency_ms;
    case Attribute::kSecurity: return security_score;
    case Attribute::kCost: return monetary_cost;
    case Attribute::kHops: return hop_count;
  }
  return 0;
}

std::string_view to_string(MenuItem item) {
  switch (item) {
    case MenuItem::kShortestPath: return "shortest-path";
    case MenuItem::kMostSecure: return "most-secure";
    case MenuItem::kLeastExpensive: return "least-expensive";
  }
  return "?";
}

MenuItem parse_menu_item(std::string_view text) {
  for (auto item : {MenuItem::kShortestPath, MenuItem::kMostSecure,
                    MenuItem::kLeastExpensive}) {
    if (text == to_string(item)) return item;
  }
  throw ModelError("unknown menu item '" + std::string(text) + "'");
}

std::map<Path, double> hybrid_scores(const Hybrid& model,
                                     const std::set<Path>& candidates,
                                     const PathAttributes& attrs) {
  if (!(model.weight >= 0 && model.weight <= 1)) {
    throw ModelError("hybrid weight must lie in [0, 1]");
  }
  check_weights(model.neighbor_weights, model.weight, "neighbor");
  check_weights(model.as_weights, 1 - model.weight, "AS");

  std::map<Attribute, std::pair<double, double>> range;
  for (const auto& p : candidates) {
    const auto& m = metrics_of(attrs, p);
    for (auto a : {Attribute::kLatency, Attribute::kSecurity, Attribute::kCost,
                   Attribute::kHops}) {
      const double v = m.raw(a);
      auto [it, fresh] = range.try_emplace(a, v, v);
      if (!fresh) {
        it->second.first = std::min(it->second.first, v);
        it->second.second = std::max(it->second.second, v);
      }
    }
  }
  auto norm = [&](Attribute a, double v) {
    const auto [lo, hi] = range.at(a);
    if (hi - lo <= 0) return 1.0;
    const double up = (v - lo) / (hi - lo);
    return higher_is_better(a) ? up : 1 - up;
  };
  std::map<Path, double> score;
  for (const auto& p : candidates) {
    const auto& m = metrics_of(attrs, p);
    double neighbor = 0;
    double own = 0;
    for (const auto& [a, w] : model.neighbor_weights) neighbor += w * norm(a, m.raw(a));
    for (const auto& [a, w] : model.as_weights) own += w * norm(a, m.raw(a));
    score[p] = model.weight * neighbor + (1 - model.weight) * own;
  }
  return score;
}

RankingFunction build_ranking(const ServiceModel& model, NodeIndex owner,
                              NodeIndex /*neighbor*/,
                              const std::set<Path>& candidates,
                              const PathAttributes& attrs) {
  for (const auto& p : candidates) metrics_of(attrs, p);

  if (const auto* total = std::get_if<TotalControl>(&model)) {
    if (total->ranking.owner() != owner) {
      throw ModelError("total-control ranking is owned by another node");
    }
    std::vector<Path> kept;
    for (const auto& p : total->ranking.acceptable()) {
      if (candidates.count(p)) kept.push_back(p);
    }
    return RankingFunction(owner, std::move(kept));
  }
  if (const auto* hybrid = std::get_if<Hybrid>(&model)) {
    return RankingFunction(owner,
                           order_by_score(hybrid_scores(*hybrid, candidates, attrs), attrs));
  }
  const auto item = std::get<Subscription>(model).item;
  std::map<Path, double> score;
  for (const auto& p : candidates) {
    const auto& m = metrics_of(attrs, p);
    switch (item) {
      case MenuItem::kShortestPath: score[p] = -m.hop_count; break;
      case MenuItem::kMostSecure: score[p] = m.security_score; break;
      case MenuItem::kLeastExpensive: score[p] = -m.monetary_cost; break;
    }
  }
  return RankingFunction(owner, order_by_score(score, attrs));
}

Instance apply_service_models(const Instance& instance, NodeIndex owner,
                              const std::map<NodeIndex, ServiceModel>& assignments,
                              const PathAttributes& attrs,
                              const std::optional<ServiceModel>& self_model) {
  const Instance ns = with_mode(instance, Mode::kNeighborSpecific);
  for (const auto& [v, unused] : assignments) {
    if (!ns.adjacent(owner, v)) {
      throw ModelError("service model assigned to non-neighbor " + ns.name(v) +
                       " of " + ns.name(owner));
    }
  }

  InstanceBuilder builder(ns);
  builder.clear_rankings();
  std::set<Path> owner_paths;
  for (const auto& [key, ranking] : ns.rankings()) {
    if (key.owner == owner) {
      owner_paths.insert(ranking.acceptable().begin(), ranking.acceptable().end());
    }
  }

  for (const auto& [key, ranking] : ns.rankings()) {
    if (!key.neighbor) {
      if (key.owner == owner && self_model) {
        builder.ranking(key, build_ranking(*self_model, owner, owner, owner_paths, attrs)
                                 .acceptable());
      } else {
        builder.ranking(key, ranking.acceptable());
      }
      continue;
    }
    const NodeIndex u = key.owner;
    const NodeIndex v = *key.neighbor;
    auto exportable = [&](const Path& p) {
      return p.head() == u && is_exportable(ns, u, v, p) &&
             is_exportable_gao_rexford(ns, u, v, p);
    };
    if (u == owner && assignments.count(v)) {
      std::set<Path> candidates;
      for (const auto& p : owner_paths) {
        if (exportable(p)) candidates.insert(p);
      }
      builder.ranking(key, build_ranking(assignments.at(v), u, v, candidates, attrs)
                               .acceptable());
      continue;
    }
    std::vector<Path> kept;
    for (const auto& p : ranking.acceptable()) {
      if (exportable(p)) kept.push_back(p);
    }
    builder.ranking(key, std::move(kept));
  }
  return builder.build();
}

}  // namespace nsbgp
