#include "nsbgp/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace nsbgp::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw FormatError(where.empty() ? what : where + ": " + what);
}

std::string at(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

std::string at(const std::string& where, std::size_t i) {
  return where + "[" + std::to_string(i) + "]";
}

void expect_object(const Json& j, const std::string& where,
                   std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& [key, unused] : j.items()) {
    if (!known.count(key)) fail(at(where, key), "unknown key");
  }
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(at(where, key), "missing");
  return *it;
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

double as_number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

std::vector<std::string> string_list(const Json& j, const std::string& where) {
  std::vector<std::string> out;
  const auto& arr = as_array(j, where);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_string(arr[i], at(where, i)));
  return out;
}

/// Runs `body`, prefixing any ModelError with `where`.
template <typename F>
auto located(const std::string& where, F&& body) {
  try {
    return body();
  } catch (const FormatError&) {
    throw;
  } catch (const ModelError& e) {
    fail(where, e.what());
  }
}

Path parse_path(const Instance& inst, const Json& j, const std::string& where) {
  std::vector<NodeIndex> nodes;
  const auto& arr = as_array(j, where);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto name = as_string(arr[i], at(where, i));
    auto index = inst.find(name);
    if (!index) fail(at(where, i), "unknown node '" + name + "'");
    nodes.push_back(*index);
  }
  return Path(std::move(nodes));
}

std::string_view to_string(LearnedClass c) {
  switch (c) {
    case LearnedClass::kCustomer: return "customer-learned";
    case LearnedClass::kPeer: return "peer-learned";
    case LearnedClass::kProvider: return "provider-learned";
    case LearnedClass::kOrigin: return "origin";
  }
  return "?";
}

LearnedClass parse_learned_class(const std::string& text, const std::string& where) {
  for (auto c : {LearnedClass::kCustomer, LearnedClass::kPeer, LearnedClass::kProvider,
                 LearnedClass::kOrigin}) {
    if (text == to_string(c)) return c;
  }
  fail(where, "unknown route class '" + text + "'");
}

std::string ranking_key_text(const Instance& inst, const RankingKey& key) {
  std::string out = inst.name(key.owner);
  if (key.neighbor) out += "->" + inst.name(*key.neighbor);
  return out;
}

RankingKey parse_ranking_key(const Instance& inst, const std::string& text,
                             const std::string& where) {
  std::string owner = text;
  std::optional<std::string> neighbor;
  for (std::string_view arrow : {"->", "→"}) {
    auto pos = text.find(arrow);
    if (pos != std::string::npos) {
      owner = text.substr(0, pos);
      neighbor = text.substr(pos + arrow.size());
      break;
    }
  }
  RankingKey key;
  auto o = inst.find(owner);
  if (!o) fail(where, "unknown node '" + owner + "'");
  key.owner = *o;
  if (neighbor) {
    auto v = inst.find(*neighbor);
    if (!v) fail(where, "unknown node '" + *neighbor + "'");
    key.neighbor = *v;
  }
  return key;
}

}  // namespace

Json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FormatError(file.string() + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(file.string() + ": " + e.what());
  }
}

Json path_to_json(const Instance& inst, const Path& path) {
  Json out = Json::array();
  for (NodeIndex n : path.nodes()) out.push_back(inst.name(n));
  return out;
}

Instance parse_instance(const Json& doc) {
  expect_object(doc, "", {"nodes", "destination", "mode", "relationships", "rankings",
                          "export"});
  InstanceBuilder b;
  const auto names = string_list(member(doc, "nodes", ""), "nodes");
  for (const auto& name : names) b.add_node(name);
  b.destination(as_string(member(doc, "destination", ""), "destination"));
  if (doc.contains("mode")) {
    b.mode(located("mode", [&] { return parse_mode(as_string(doc["mode"], "mode")); }));
  }
  if (doc.contains("relationships")) {
    const auto& rels = as_array(doc["relationships"], "relationships");
    for (std::size_t i = 0; i < rels.size(); ++i) {
      const auto where = at("relationships", i);
      expect_object(rels[i], where, {"a", "b", "kind"});
      const auto a = as_string(member(rels[i], "a", where), at(where, "a"));
      const auto bn = as_string(member(rels[i], "b", where), at(where, "b"));
      const auto kind = as_string(member(rels[i], "kind", where), at(where, "kind"));
      located(where, [&] {
        if (kind == "customer-of") {
          b.customer_of(a, bn);
        } else if (kind == "peer") {
          b.peers(a, bn);
        } else {
          fail(at(where, "kind"), "unknown relationship kind '" + kind + "'");
        }
        return 0;
      });
    }
  }
  if (doc.contains("export")) {
    const auto& e = doc["export"];
    if (e.is_string()) {
      if (e.get<std::string>() != "gao-rexford") fail("export", "unknown export policy");
      b.export_policy(GaoRexfordExport{});
    } else {
      expect_object(e, "export", {"rules"});
      const auto& rules = as_array(member(e, "rules", "export"), "export.rules");
      const Instance names_only = b.build();
      ExplicitExport policy;
      for (std::size_t i = 0; i < rules.size(); ++i) {
        const auto where = at("export.rules", i);
        expect_object(rules[i], where, {"from", "to", "action", "match"});
        ExportRule rule;
        rule.from = located(at(where, "from"), [&] {
          return names_only.index(as_string(member(rules[i], "from", where), at(where, "from")));
        });
        rule.to = located(at(where, "to"), [&] {
          return names_only.index(as_string(member(rules[i], "to", where), at(where, "to")));
        });
        const auto action = as_string(member(rules[i], "action", where), at(where, "action"));
        if (action == "allow") {
          rule.action = ExportRule::Action::kAllow;
        } else if (action == "deny") {
          rule.action = ExportRule::Action::kDeny;
        } else {
          fail(at(where, "action"), "expected allow or deny");
        }
        const auto& match = member(rules[i], "match", where);
        if (match.is_string()) {
          rule.match = parse_learned_class(match.get<std::string>(), at(where, "match"));
        } else {
          expect_object(match, at(where, "match"), {"path"});
          rule.match = parse_path(names_only, member(match, "path", at(where, "match")),
                                  at(where, "match.path"));
        }
        policy.rules.push_back(std::move(rule));
      }
      b.export_policy(std::move(policy));
    }
  }
  if (doc.contains("rankings")) {
    const auto& rankings = doc["rankings"];
    if (!rankings.is_object()) fail("rankings", "expected an object");
    const Instance names_only = b.build();
    for (const auto& [key_text, list] : rankings.items()) {
      const auto where = at("rankings", key_text);
      const RankingKey key = parse_ranking_key(names_only, key_text, where);
      std::vector<Path> paths;
      const auto& arr = as_array(list, where);
      for (std::size_t i = 0; i < arr.size(); ++i) {
        paths.push_back(parse_path(names_only, arr[i], at(where, i)));
      }
      b.ranking(key, std::move(paths));
    }
  }
  return b.build();
}

Json instance_to_json(const Instance& inst) {
  Json doc;
  doc["nodes"] = inst.names();
  doc["destination"] = inst.destination_name();
  doc["mode"] = std::string(to_string(inst.mode()));
  Json rels = Json::array();
  for (const auto& r : inst.relationships()) {
    rels.push_back({{"a", inst.name(r.a)},
                    {"b", inst.name(r.b)},
                    {"kind", r.kind == Relationship::Kind::kPeer ? "peer" : "customer-of"}});
  }
  doc["relationships"] = std::move(rels);
  Json rankings = Json::object();
  for (const auto& [key, ranking] : inst.rankings()) {
    Json list = Json::array();
    for (const auto& p : ranking.acceptable()) list.push_back(path_to_json(inst, p));
    rankings[ranking_key_text(inst, key)] = std::move(list);
  }
  doc["rankings"] = std::move(rankings);
  if (std::holds_alternative<GaoRexfordExport>(inst.export_policy())) {
    doc["export"] = "gao-rexford";
  } else {
    Json rules = Json::array();
    for (const auto& rule : std::get<ExplicitExport>(inst.export_policy()).rules) {
      Json r;
      r["from"] = inst.name(rule.from);
      r["to"] = inst.name(rule.to);
      r["action"] = rule.action == ExportRule::Action::kAllow ? "allow" : "deny";
      if (const auto* c = std::get_if<LearnedClass>(&rule.match)) {
        r["match"] = std::string(to_string(*c));
      } else {
        r["match"] = {{"path", path_to_json(inst, std::get<Path>(rule.match))}};
      }
      rules.push_back(std::move(r));
    }
    doc["export"] = {{"rules", std::move(rules)}};
  }
  return doc;
}

Instance load_instance(const std::filesystem::path& file) {
  const auto doc = read_json_file(file);
  try {
    return parse_instance(doc);
  } catch (const FormatError& e) {
    throw FormatError(file.string() + ": " + e.what());
  }
}

namespace {

intra_as::Dissemination parse_dissemination(const Json& j, const std::string& where) {
  using namespace intra_as;
  if (j.is_string()) {
    const auto text = j.get<std::string>();
    if (text == "single-best") return SingleBest{};
    if (text == "class-best") return ClassBest{};
    if (text == "rcp") return RcpFull{};
    fail(where, "unknown dissemination mode '" + text + "'");
  }
  expect_object(j, where, {"add-paths", "route-reflector"});
  if (j.size() != 1) fail(where, "expected exactly one dissemination mode");
  if (j.contains("add-paths")) {
    const double k = as_number(j["add-paths"], at(where, "add-paths"));
    if (k < 1 || k != static_cast<double>(static_cast<std::size_t>(k))) {
      fail(at(where, "add-paths"), "expected a positive integer");
    }
    return AddPaths{static_cast<std::size_t>(k)};
  }
  const auto rr_where = at(where, "route-reflector");
  const auto& rr = j["route-reflector"];
  expect_object(rr, rr_where, {"reflectors", "clients"});
  RouteReflector out;
  for (const auto& r : string_list(member(rr, "reflectors", rr_where), at(rr_where, "reflectors"))) {
    out.reflectors.insert(r);
  }
  if (rr.contains("clients")) {
    if (!rr["clients"].is_object()) fail(at(rr_where, "clients"), "expected an object");
    for (const auto& [reflector, clients] : rr["clients"].items()) {
      for (const auto& c : string_list(clients, at(at(rr_where, "clients"), reflector))) {
        out.clients[reflector].insert(c);
      }
    }
  }
  return out;
}

Json dissemination_to_json(const intra_as::Dissemination& mode) {
  using namespace intra_as;
  if (std::holds_alternative<SingleBest>(mode)) return "single-best";
  if (std::holds_alternative<ClassBest>(mode)) return "class-best";
  if (std::holds_alternative<RcpFull>(mode)) return "rcp";
  if (const auto* add = std::get_if<AddPaths>(&mode)) return Json{{"add-paths", add->k}};
  const auto& rr = std::get<RouteReflector>(mode);
  Json clients = Json::object();
  for (const auto& [r, cs] : rr.clients) clients[r] = std::vector<std::string>(cs.begin(), cs.end());
  return Json{{"route-reflector",
               {{"reflectors", std::vector<std::string>(rr.reflectors.begin(), rr.reflectors.end())},
                {"clients", std::move(clients)}}}};
}

}  // namespace

intra_as::AsConfig parse_as_config(const Json& doc) {
  expect_object(doc, "", {"name", "destination", "routers", "igp", "sessions",
                          "external_links", "offers", "dissemination", "classifier"});
  intra_as::AsConfig c;
  if (doc.contains("name")) c.name = as_string(doc["name"], "name");
  if (doc.contains("destination")) c.destination = as_string(doc["destination"], "destination");
  c.routers = string_list(member(doc, "routers", ""), "routers");
  if (doc.contains("igp")) {
    const auto& igp = as_array(doc["igp"], "igp");
    for (std::size_t i = 0; i < igp.size(); ++i) {
      const auto where = at("igp", i);
      expect_object(igp[i], where, {"a", "b", "cost"});
      c.igp.push_back({as_string(member(igp[i], "a", where), at(where, "a")),
                       as_string(member(igp[i], "b", where), at(where, "b")),
                       as_number(member(igp[i], "cost", where), at(where, "cost"))});
    }
  }
  if (doc.contains("sessions")) {
    const auto& sessions = as_array(doc["sessions"], "sessions");
    for (std::size_t i = 0; i < sessions.size(); ++i) {
      auto pair = string_list(sessions[i], at("sessions", i));
      if (pair.size() != 2) fail(at("sessions", i), "expected two routers");
      c.sessions.push_back({pair[0], pair[1]});
    }
  }
  const auto& links = as_array(member(doc, "external_links", ""), "external_links");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto where = at("external_links", i);
    expect_object(links[i], where, {"id", "router", "neighbor", "relationship"});
    intra_as::ExternalLink link;
    link.id = as_string(member(links[i], "id", where), at(where, "id"));
    link.router = as_string(member(links[i], "router", where), at(where, "router"));
    link.neighbor = as_string(member(links[i], "neighbor", where), at(where, "neighbor"));
    link.relationship = located(at(where, "relationship"), [&] {
      return parse_relation(
          as_string(member(links[i], "relationship", where), at(where, "relationship")));
    });
    c.external_links.push_back(std::move(link));
  }
  if (doc.contains("offers")) {
    if (!doc["offers"].is_object()) fail("offers", "expected an object");
    for (const auto& [id, path] : doc["offers"].items()) {
      c.offers[id] = string_list(path, at("offers", id));
    }
  }
  if (doc.contains("dissemination")) {
    c.dissemination = parse_dissemination(doc["dissemination"], "dissemination");
  }
  if (doc.contains("classifier")) {
    const auto& cl = doc["classifier"];
    expect_object(cl, "classifier", {"relationship_rank", "path_length"});
    if (cl.contains("relationship_rank")) {
      const auto where = at("classifier", "relationship_rank");
      if (!cl["relationship_rank"].is_object()) fail(where, "expected an object");
      for (const auto& [rel, rank] : cl["relationship_rank"].items()) {
        const auto r = located(at(where, rel), [&] { return parse_relation(rel); });
        c.classifier.relationship_rank[r] = static_cast<int>(as_number(rank, at(where, rel)));
      }
    }
    if (cl.contains("path_length")) {
      if (!cl["path_length"].is_boolean()) fail("classifier.path_length", "expected a boolean");
      c.classifier.path_length = cl["path_length"].get<bool>();
    }
  }
  return c;
}

Json as_config_to_json(const intra_as::AsConfig& c) {
  Json doc;
  doc["name"] = c.name;
  doc["destination"] = c.destination;
  doc["routers"] = c.routers;
  Json igp = Json::array();
  for (const auto& e : c.igp) igp.push_back({{"a", e.a}, {"b", e.b}, {"cost", e.cost}});
  doc["igp"] = std::move(igp);
  Json sessions = Json::array();
  for (const auto& [a, b] : c.sessions) sessions.push_back({a, b});
  doc["sessions"] = std::move(sessions);
  Json links = Json::array();
  for (const auto& l : c.external_links) {
    links.push_back({{"id", l.id},
                     {"router", l.router},
                     {"neighbor", l.neighbor},
                     {"relationship", std::string(to_string(l.relationship))}});
  }
  doc["external_links"] = std::move(links);
  Json offers = Json::object();
  for (const auto& [id, path] : c.offers) offers[id] = path;
  doc["offers"] = std::move(offers);
  doc["dissemination"] = dissemination_to_json(c.dissemination);
  Json ranks = Json::object();
  for (const auto& [rel, rank] : c.classifier.relationship_rank) {
    ranks[std::string(to_string(rel))] = rank;
  }
  doc["classifier"] = {{"relationship_rank", std::move(ranks)},
                       {"path_length", c.classifier.path_length}};
  return doc;
}

intra_as::AsConfig load_as_config(const std::filesystem::path& file) {
  const auto doc = read_json_file(file);
  try {
    return parse_as_config(doc);
  } catch (const FormatError& e) {
    throw FormatError(file.string() + ": " + e.what());
  }
}

PathAttributes parse_attributes(const Instance& inst, const Json& doc) {
  expect_object(doc, "", {"paths"});
  PathAttributes attrs;
  const auto& list = as_array(member(doc, "paths", ""), "paths");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto where = at("paths", i);
    expect_object(list[i], where,
                  {"path", "latency_ms", "security_score", "monetary_cost", "hop_count"});
    const Path p = parse_path(inst, member(list[i], "path", where), at(where, "path"));
    if (p.empty()) fail(at(where, "path"), "empty path");
    PathMetrics m;
    m.hop_count = static_cast<int>(p.size()) - 1;
    m.latency_ms = as_number(member(list[i], "latency_ms", where), at(where, "latency_ms"));
    m.security_score = as_number(member(list[i], "security_score", where), at(where, "security_score"));
    m.monetary_cost = as_number(member(list[i], "monetary_cost", where), at(where, "monetary_cost"));
    if (list[i].contains("hop_count")) m.hop_count = static_cast<int>(as_number(list[i]["hop_count"], at(where, "hop_count")));
    if (m.latency_ms < 0 || m.monetary_cost < 0) fail(where, "negative latency or cost");
    if (m.security_score < 0 || m.security_score > 1) fail(where, "security_score outside [0, 1]");
    if (m.hop_count < 1) fail(where, "hop_count must be positive");
    if (!attrs.emplace(p, m).second) fail(where, "duplicate path");
  }
  return attrs;
}

Json attributes_to_json(const Instance& inst, const PathAttributes& attrs) {
  Json list = Json::array();
  for (const auto& [p, m] : attrs) {
    list.push_back({{"path", path_to_json(inst, p)},
                    {"latency_ms", m.latency_ms},
                    {"security_score", m.security_score},
                    {"monetary_cost", m.monetary_cost},
                    {"hop_count", m.hop_count}});
  }
  return {{"paths", std::move(list)}};
}

namespace {

std::map<Attribute, double> parse_weights(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  std::map<Attribute, double> out;
  for (const auto& [name, w] : j.items()) {
    const auto a = located(at(where, name), [&] { return parse_attribute(name); });
    out[a] = as_number(w, at(where, name));
  }
  return out;
}

Json weights_to_json(const std::map<Attribute, double>& weights) {
  Json out = Json::object();
  for (const auto& [a, w] : weights) out[std::string(to_string(a))] = w;
  return out;
}

ServiceModel parse_model(const Instance& inst, NodeIndex owner, const Json& j,
                         const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto kind = as_string(member(j, "model", where), at(where, "model"));
  if (kind == "subscription") {
    expect_object(j, where, {"model", "item"});
    return Subscription{located(at(where, "item"), [&] {
      return parse_menu_item(as_string(member(j, "item", where), at(where, "item")));
    })};
  }
  if (kind == "total-control") {
    expect_object(j, where, {"model", "ranking"});
    std::vector<Path> paths;
    const auto& arr = as_array(member(j, "ranking", where), at(where, "ranking"));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      paths.push_back(parse_path(inst, arr[i], at(at(where, "ranking"), i)));
    }
    return located(where, [&] { return TotalControl{RankingFunction(owner, std::move(paths))}; });
  }
  if (kind == "hybrid") {
    expect_object(j, where, {"model", "weight", "neighbor_weights", "as_weights"});
    Hybrid h;
    h.weight = as_number(member(j, "weight", where), at(where, "weight"));
    if (j.contains("neighbor_weights")) h.neighbor_weights = parse_weights(j["neighbor_weights"], at(where, "neighbor_weights"));
    if (j.contains("as_weights")) h.as_weights = parse_weights(j["as_weights"], at(where, "as_weights"));
    return h;
  }
  fail(at(where, "model"), "unknown service model '" + kind + "'");
}

Json model_to_json(const Instance& inst, const ServiceModel& model) {
  if (const auto* s = std::get_if<Subscription>(&model)) {
    return {{"model", "subscription"}, {"item", std::string(to_string(s->item))}};
  }
  if (const auto* t = std::get_if<TotalControl>(&model)) {
    Json list = Json::array();
    for (const auto& p : t->ranking.acceptable()) list.push_back(path_to_json(inst, p));
    return {{"model", "total-control"}, {"ranking", std::move(list)}};
  }
  const auto& h = std::get<Hybrid>(model);
  return {{"model", "hybrid"},
          {"weight", h.weight},
          {"neighbor_weights", weights_to_json(h.neighbor_weights)},
          {"as_weights", weights_to_json(h.as_weights)}};
}

}  // namespace

ServiceAssignment parse_assignment(const Instance& inst, const Json& doc) {
  expect_object(doc, "", {"owner", "neighbors", "self"});
  ServiceAssignment out;
  const auto owner = as_string(member(doc, "owner", ""), "owner");
  auto o = inst.find(owner);
  if (!o) fail("owner", "unknown node '" + owner + "'");
  out.owner = *o;
  const auto& neighbors = member(doc, "neighbors", "");
  if (!neighbors.is_object()) fail("neighbors", "expected an object");
  for (const auto& [name, model] : neighbors.items()) {
    auto v = inst.find(name);
    if (!v) fail(at("neighbors", name), "unknown node '" + name + "'");
    out.models[*v] = parse_model(inst, out.owner, model, at("neighbors", name));
  }
  if (doc.contains("self")) out.self = parse_model(inst, out.owner, doc["self"], "self");
  return out;
}

Json assignment_to_json(const Instance& inst, const ServiceAssignment& assignment) {
  Json doc;
  doc["owner"] = inst.name(assignment.owner);
  Json neighbors = Json::object();
  for (const auto& [v, model] : assignment.models) {
    neighbors[inst.name(v)] = model_to_json(inst, model);
  }
  doc["neighbors"] = std::move(neighbors);
  if (assignment.self) doc["self"] = model_to_json(inst, *assignment.self);
  return doc;
}

}  // namespace nsbgp::io
