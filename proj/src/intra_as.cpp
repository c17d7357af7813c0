#include "nsbgp/intra_as.hpp"

#include <algorithm>
#include <limits>

namespace nsbgp::intra_as {

std::string describe(const Dissemination& mode) {
  struct {
    std::string operator()(const SingleBest&) const { return "single-best"; }
    std::string operator()(const RouteReflector&) const { return "route-reflector"; }
    std::string operator()(const AddPaths& a) const {
      return "add-paths(" + std::to_string(a.k) + ")";
    }
    std::string operator()(const ClassBest&) const { return "class-best"; }
    std::string operator()(const RcpFull&) const { return "rcp"; }
  } visitor;
  return std::visit(visitor, mode);
}

AsInternal::AsInternal(AsConfig config) : config_(std::move(config)) {
  const auto& routers = config_.routers;
  for (std::size_t i = 0; i < routers.size(); ++i) {
    if (!router_index_.emplace(routers[i], i).second) {
      throw AsError("duplicate router " + routers[i]);
    }
  }
  if (routers.empty()) throw AsError("AS has no routers");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t n = routers.size();
  dist_.assign(n, std::vector<double>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) dist_[i][i] = 0;
  for (const auto& edge : config_.igp) {
    if (!(edge.cost > 0)) {
      throw AsError("IGP cost " + edge.a + "-" + edge.b + " must be positive");
    }
    auto a = router_index(edge.a);
    auto b = router_index(edge.b);
    dist_[a][b] = std::min(dist_[a][b], edge.cost);
    dist_[b][a] = std::min(dist_[b][a], edge.cost);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        dist_[i][j] = std::min(dist_[i][j], dist_[i][k] + dist_[k][j]);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dist_[0][i] == kInf) {
      throw AsError("IGP graph is disconnected at " + routers[i]);
    }
  }

  for (std::size_t i = 0; i < config_.external_links.size(); ++i) {
    const auto& link = config_.external_links[i];
    router_index(link.router);
    if (!link_index_.emplace(link.id, i).second) {
      throw AsError("duplicate link id " + link.id);
    }
  }
  for (const auto& [id, path] : config_.offers) {
    if (!link_index_.count(id)) throw AsError("offer on unknown link " + id);
    if (path.empty()) throw AsError("empty offer on link " + id);
  }
  for (const auto& [a, b] : config_.sessions) {
    router_index(a);
    router_index(b);
  }
  if (const auto* rr = std::get_if<RouteReflector>(&config_.dissemination)) {
    for (const auto& r : rr->reflectors) router_index(r);
    for (const auto& [r, clients] : rr->clients) {
      if (!rr->reflectors.count(r)) throw AsError(r + " has clients but is not a reflector");
      for (const auto& c : clients) router_index(c);
    }
  }
  if (const auto* add = std::get_if<AddPaths>(&config_.dissemination)) {
    if (add->k < 1) throw AsError("add-paths k must be at least 1");
  }
}

std::size_t AsInternal::router_index(const RouterId& id) const {
  auto it = router_index_.find(id);
  if (it == router_index_.end()) throw AsError("unknown router " + id);
  return it->second;
}

const ExternalLink& AsInternal::link(const LinkId& id) const {
  auto it = link_index_.find(id);
  if (it == link_index_.end()) throw AsError("unknown link " + id);
  return config_.external_links[it->second];
}

std::vector<const ExternalLink*> AsInternal::links_of(
    const std::string& neighbor) const {
  std::vector<const ExternalLink*> out;
  for (const auto& link : config_.external_links) {
    if (link.neighbor == neighbor) out.push_back(&link);
  }
  return out;
}

double AsInternal::distance(const RouterId& from, const RouterId& to) const {
  return dist_[router_index(from)][router_index(to)];
}

std::pair<int, std::size_t> AsInternal::class_key(const Route& route) const {
  const auto& rel = link(route.link).relationship;
  auto it = config_.classifier.relationship_rank.find(rel);
  const int rank = it == config_.classifier.relationship_rank.end() ? 0 : it->second;
  return {rank, config_.classifier.path_length ? route.path.size() : 0};
}

std::tuple<int, std::size_t, double, LinkId> AsInternal::preference_key(
    const RouterId& router, const Route& route) const {
  auto [rank, length] = class_key(route);
  return {rank, length, distance(router, egress_router(route)), route.link};
}

bool AsInternal::exportable(const Route& route, const ExternalLink& ingress) const {
  if (route.link == ingress.id) return false;
  if (std::find(route.path.begin(), route.path.end(), ingress.neighbor) !=
      route.path.end()) {
    return false;
  }
  if (ingress.relationship == Relation::kCustomer) return true;
  return link(route.link).relationship == Relation::kCustomer;
}

std::vector<Route> AsInternal::all_offers() const {
  std::vector<Route> out;
  for (const auto& [id, path] : config_.offers) out.push_back({id, path});
  return out;
}

std::vector<std::pair<RouterId, RouterId>> AsInternal::session_pairs() const {
  if (!config_.sessions.empty()) return config_.sessions;
  std::vector<std::pair<RouterId, RouterId>> mesh;
  for (std::size_t i = 0; i < config_.routers.size(); ++i) {
    for (std::size_t j = i + 1; j < config_.routers.size(); ++j) {
      mesh.push_back({config_.routers[i], config_.routers[j]});
    }
  }
  return mesh;
}

Route hot_potato_select(const AsInternal& as, const RouterId& router,
                        const std::vector<Route>& offers) {
  if (offers.empty()) throw AsError("hot-potato selection needs at least one offer");
  return *std::min_element(offers.begin(), offers.end(),
                           [&](const Route& a, const Route& b) {
                             return as.preference_key(router, a) <
                                    as.preference_key(router, b);
                           });
}

namespace {

std::vector<Route> ranked(const AsInternal& as, const RouterId& router,
                          std::vector<Route> routes) {
  std::sort(routes.begin(), routes.end(), [&](const Route& a, const Route& b) {
    return as.preference_key(router, a) < as.preference_key(router, b);
  });
  return routes;
}

std::vector<Route> own_offers(const AsInternal& as, const RouterId& router) {
  std::vector<Route> out;
  for (const auto& route : as.all_offers()) {
    if (as.egress_router(route) == router) out.push_back(route);
  }
  return out;
}

std::vector<Route> choose_announcements(const AsInternal& as,
                                        const RouterId& router,
                                        const std::vector<Route>& visible) {
  auto order = ranked(as, router, visible);
  const auto& mode = as.config().dissemination;
  if (order.empty()) return {};
  if (std::holds_alternative<SingleBest>(mode)) return {order.front()};
  if (const auto* add = std::get_if<AddPaths>(&mode)) {
    if (order.size() > add->k) order.resize(add->k);
    return order;
  }
  // ClassBest: best of all routes and best customer-learned route.
  std::vector<Route> out{order.front()};
  for (const auto& route : order) {
    if (as.link(route.link).relationship == Relation::kCustomer) {
      if (route != out.front()) out.push_back(route);
      break;
    }
  }
  return out;
}

Visibility sorted_view(std::map<RouterId, std::set<Route>> visible,
                       std::map<RouterId, std::set<Route>> announced) {
  Visibility out;
  for (auto& [r, routes] : visible) out.visible[r].assign(routes.begin(), routes.end());
  for (auto& [r, routes] : announced) out.announced[r].assign(routes.begin(), routes.end());
  return out;
}

Visibility disseminate_reflected(const AsInternal& as, const RouteReflector& rr) {
  enum class Source { kOwn, kClient, kNonClient };
  std::map<RouterId, std::set<RouterId>> reflectors_of;
  for (const auto& [reflector, clients] : rr.clients) {
    for (const auto& c : clients) reflectors_of[c].insert(reflector);
  }

  std::map<RouterId, std::set<Route>> visible;
  std::map<RouterId, std::set<Route>> announced;
  // received[r][route] = best source category it arrived from
  std::map<RouterId, std::map<Route, Source>> received;
  const std::size_t budget = 4 * (as.routers().size() + as.all_offers().size()) + 4;

  for (std::size_t iter = 0;; ++iter) {
    if (iter > budget) throw AsError("route reflection did not reach a fixed point");
    std::map<RouterId, std::map<Route, Source>> incoming;
    std::map<RouterId, std::set<Route>> next_visible;
    std::map<RouterId, std::set<Route>> next_announced;

    for (const auto& r : as.routers()) {
      std::map<Route, Source> view;
      for (const auto& route : own_offers(as, r)) view[route] = Source::kOwn;
      for (const auto& [route, source] : received[r]) {
        auto it = view.find(route);
        if (it == view.end() || source < it->second) view[route] = source;
      }
      for (const auto& [route, unused] : view) next_visible[r].insert(route);
      if (view.empty()) continue;

      std::vector<Route> routes;
      for (const auto& [route, unused] : view) routes.push_back(route);
      const Route best = hot_potato_select(as, r, routes);
      const Source source = view[best];

      std::set<RouterId> targets;
      const bool reflector = rr.reflectors.count(r) > 0;
      if (reflector) {
        auto clients = rr.clients.count(r) ? rr.clients.at(r) : std::set<RouterId>{};
        targets.insert(clients.begin(), clients.end());
        if (source != Source::kNonClient) {
          for (const auto& other : rr.reflectors) {
            if (other != r) targets.insert(other);
          }
        }
      } else if (source == Source::kOwn && reflectors_of.count(r)) {
        targets = reflectors_of[r];
      }
      if (targets.empty()) continue;
      next_announced[r].insert(best);
      for (const auto& t : targets) {
        // Seen from t: r is a client if t reflects for r.
        const bool from_client = rr.clients.count(t) && rr.clients.at(t).count(r);
        const Source arrival = from_client ? Source::kClient : Source::kNonClient;
        auto& slot = incoming[t];
        auto it = slot.find(best);
        if (it == slot.end() || arrival < it->second) slot[best] = arrival;
      }
    }
    if (incoming == received && next_visible == visible && next_announced == announced) {
      return sorted_view(std::move(visible), std::move(announced));
    }
    received = std::move(incoming);
    visible = std::move(next_visible);
    announced = std::move(next_announced);
  }
}

}  // namespace

Visibility disseminate(const AsInternal& as) {
  const auto& mode = as.config().dissemination;
  if (std::holds_alternative<RcpFull>(mode)) {
    Visibility out;
    for (const auto& r : as.routers()) {
      out.visible[r] = as.all_offers();
      out.announced[r] = as.all_offers();
    }
    return out;
  }
  if (const auto* rr = std::get_if<RouteReflector>(&mode)) {
    auto out = disseminate_reflected(as, *rr);
    for (const auto& r : as.routers()) {
      out.visible[r];
      out.announced[r];
    }
    return out;
  }

  std::map<RouterId, std::vector<RouterId>> peers;
  for (const auto& [a, b] : as.session_pairs()) {
    peers[a].push_back(b);
    peers[b].push_back(a);
  }
  std::map<RouterId, std::set<Route>> visible;
  std::map<RouterId, std::set<Route>> announced;
  for (const auto& r : as.routers()) {
    auto own = own_offers(as, r);
    visible[r] = {own.begin(), own.end()};
    announced[r] = {};
  }
  const std::size_t budget = 4 * (as.routers().size() + as.all_offers().size()) + 4;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > budget) throw AsError("dissemination did not reach a fixed point");
    std::map<RouterId, std::set<Route>> next_announced;
    for (const auto& r : as.routers()) {
      auto chosen = choose_announcements(
          as, r, std::vector<Route>(visible[r].begin(), visible[r].end()));
      next_announced[r] = {chosen.begin(), chosen.end()};
    }
    std::map<RouterId, std::set<Route>> next_visible;
    for (const auto& r : as.routers()) {
      auto own = own_offers(as, r);
      auto& view = next_visible[r];
      view.insert(own.begin(), own.end());
      for (const auto& p : peers[r]) {
        view.insert(next_announced[p].begin(), next_announced[p].end());
      }
    }
    if (next_visible == visible && next_announced == announced) break;
    visible = std::move(next_visible);
    announced = std::move(next_announced);
  }
  return sorted_view(std::move(visible), std::move(announced));
}

std::vector<Route> visible_routes(const AsInternal& as, const RouterId& router) {
  auto view = disseminate(as);
  auto it = view.visible.find(router);
  if (it == view.visible.end()) throw AsError("unknown router " + router);
  return it->second;
}

Selection egress_selection(const AsInternal& as, SelectionMode mode,
                           const SelectionOptions& options) {
  if (mode == SelectionMode::kFilterFirst && !options.pinned_best.empty()) {
    throw AsError("pinned best routes only apply to conventional selection");
  }
  const auto view = disseminate(as);
  Selection out;
  for (const auto& link : as.config().external_links) {
    if (options.neighbor_class && link.relationship != *options.neighbor_class) {
      continue;
    }
    const auto& visible = view.visible.at(link.router);
    std::optional<Route> chosen;
    if (mode == SelectionMode::kConventional) {
      std::optional<Route> best;
      if (auto pin = options.pinned_best.find(link.router);
          pin != options.pinned_best.end()) {
        for (const auto& route : visible) {
          if (route.link == pin->second) best = route;
        }
      }
      if (!best && !visible.empty()) best = hot_potato_select(as, link.router, visible);
      if (best && as.exportable(*best, link)) chosen = best;
    } else {
      std::vector<Route> allowed;
      for (const auto& route : visible) {
        if (as.exportable(route, link)) allowed.push_back(route);
      }
      if (!allowed.empty()) chosen = hot_potato_select(as, link.router, allowed);
    }
    out[link.id] = std::move(chosen);
  }
  return out;
}

Selection customized_selection(
    const AsInternal& as,
    const std::map<LinkId, std::vector<LinkId>>& preferences) {
  const auto view = disseminate(as);
  Selection out = egress_selection(as, SelectionMode::kFilterFirst);
  for (const auto& [ingress_id, wanted] : preferences) {
    const auto& ingress = as.link(ingress_id);
    const auto& visible = view.visible.at(ingress.router);
    for (const auto& egress : wanted) {
      auto it = std::find_if(visible.begin(), visible.end(), [&](const Route& r) {
        return r.link == egress && as.exportable(r, ingress);
      });
      if (it != visible.end()) {
        out[ingress_id] = *it;
        break;
      }
    }
  }
  return out;
}

CheckResult check_consistent_export(const AsInternal& as,
                                    const std::string& neighbor,
                                    const Selection& selection) {
  const auto links = as.links_of(neighbor);
  if (links.size() < 2) {
    throw AsError("consistent export needs at least two links to " + neighbor);
  }
  CheckResult result;
  std::optional<std::pair<int, std::size_t>> top;
  for (const auto* link : links) {
    auto it = selection.find(link->id);
    if (it == selection.end() || !it->second) continue;
    auto key = as.class_key(*it->second);
    if (!top || key < *top) top = key;
  }
  for (const auto* link : links) {
    auto it = selection.find(link->id);
    if (it == selection.end() || !it->second) {
      result.offending.push_back(link->id);
    } else if (as.class_key(*it->second) != *top) {
      result.offending.push_back(link->id);
    }
  }
  result.pass = result.offending.empty();
  result.explanation =
      result.pass ? "every link to " + neighbor + " announces an equally good route"
                  : "links to " + neighbor + " announce nothing or unequal routes";
  return result;
}

CheckResult check_hot_potato(const AsInternal& as, const Selection& selection) {
  const auto view = disseminate(as);
  CheckResult result;
  for (const auto& [link_id, route] : selection) {
    if (!route) continue;
    const auto& ingress = as.link(link_id);
    std::vector<Route> allowed;
    for (const auto& r : view.visible.at(ingress.router)) {
      if (as.exportable(r, ingress)) allowed.push_back(r);
    }
    if (allowed.empty()) continue;
    const Route ideal = hot_potato_select(as, ingress.router, allowed);
    const bool same_class = as.class_key(*route) == as.class_key(ideal);
    const double got = as.distance(ingress.router, as.egress_router(*route));
    const double best = as.distance(ingress.router, as.egress_router(ideal));
    if (!same_class || got > best) result.offending.push_back(link_id);
  }
  result.pass = result.offending.empty();
  result.explanation = result.pass
                           ? "every ingress uses its closest equally good exit"
                           : "some ingress links skip a closer equally good exit";
  return result;
}

TunnelTable assign_tunnels(const AsInternal& as, const Selection& selection) {
  TunnelTable table;
  for (const auto& [ingress, route] : selection) {
    if (!route) continue;
    table.entries[ingress] = {route->link, as.egress_router(*route), true};
  }
  return table;
}

std::map<RouterId, std::size_t> dissemination_overhead(const AsInternal& as) {
  std::map<RouterId, std::size_t> out;
  for (const auto& [router, routes] : disseminate(as).announced) {
    out[router] = routes.size();
  }
  return out;
}

}  // namespace nsbgp::intra_as
