#include "nsbgp/model.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace nsbgp {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kConventional:
      return "conventional";
    case Mode::kFilterFirst:
      return "filter-first";
    case Mode::kNeighborSpecific:
      return "neighbor-specific";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  if (text == "conventional") return Mode::kConventional;
  if (text == "filter-first") return Mode::kFilterFirst;
  if (text == "neighbor-specific") return Mode::kNeighborSpecific;
  throw ModelError("unknown mode '" + std::string(text) + "'");
}

std::string_view to_string(Relation relation) {
  switch (relation) {
    case Relation::kCustomer:
      return "customer";
    case Relation::kPeer:
      return "peer";
    case Relation::kProvider:
      return "provider";
  }
  return "?";
}

Relation parse_relation(std::string_view text) {
  if (text == "customer") return Relation::kCustomer;
  if (text == "peer") return Relation::kPeer;
  if (text == "provider") return Relation::kProvider;
  throw ModelError("unknown relationship '" + std::string(text) + "'");
}

bool Path::contains(NodeIndex node) const {
  return std::find(nodes_.begin(), nodes_.end(), node) != nodes_.end();
}

bool Path::is_simple() const {
  std::vector<NodeIndex> sorted = nodes_;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

Path Path::tail() const {
  if (nodes_.size() < 2) return Path{};
  return Path(std::vector<NodeIndex>(nodes_.begin() + 1, nodes_.end()));
}

std::optional<Path> extend(const Path& neighbor_path, NodeIndex via) {
  if (neighbor_path.empty() || neighbor_path.contains(via)) {
    return std::nullopt;
  }
  std::vector<NodeIndex> nodes;
  nodes.reserve(neighbor_path.size() + 1);
  nodes.push_back(via);
  nodes.insert(nodes.end(), neighbor_path.nodes().begin(),
               neighbor_path.nodes().end());
  return Path(std::move(nodes));
}

RankingFunction::RankingFunction(NodeIndex owner, std::vector<Path> acceptable)
    : owner_(owner), acceptable_(std::move(acceptable)) {
  for (std::size_t i = 0; i < acceptable_.size(); ++i) {
    index_.emplace(acceptable_[i], i);  // duplicates keep the first rank
  }
}

std::optional<std::size_t> RankingFunction::rank(const Path& path) const {
  if (path.empty()) return acceptable_.size();
  auto it = index_.find(path);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeIndex> Instance::find(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

NodeIndex Instance::index(std::string_view name) const {
  auto found = find(name);
  if (!found) throw ModelError("unknown node '" + std::string(name) + "'");
  return *found;
}

NodeIndex Instance::dest() const {
  if (!destination_) {
    throw ModelError("destination '" + destination_name_ +
                     "' is not a node of the instance");
  }
  return *destination_;
}

bool Instance::adjacent(NodeIndex a, NodeIndex b) const {
  return neighbor_slot(a, b).has_value();
}

std::optional<std::size_t> Instance::neighbor_slot(NodeIndex node,
                                                   NodeIndex neighbor) const {
  const std::size_t n = names_.size();
  if (node >= n || neighbor >= n) return std::nullopt;
  auto slot = slot_[node * n + neighbor];
  if (slot < 0) return std::nullopt;
  return static_cast<std::size_t>(slot);
}

std::optional<Relation> Instance::relation(NodeIndex node,
                                           NodeIndex neighbor) const {
  const std::size_t n = names_.size();
  if (node >= n || neighbor >= n) return std::nullopt;
  return relation_[node * n + neighbor];
}

const RankingFunction* Instance::ranking(const RankingKey& key) const {
  auto it = rankings_.find(key);
  return it == rankings_.end() ? nullptr : &it->second;
}

std::string Instance::render(const Path& path) const {
  std::string out = "(";
  bool first = true;
  for (NodeIndex node : path.nodes()) {
    if (!first) out += ' ';
    out += names_.at(node);
    first = false;
  }
  out += ')';
  return out;
}

bool Instance::operator==(const Instance& other) const {
  return names_ == other.names_ &&
         destination_name_ == other.destination_name_ &&
         mode_ == other.mode_ && relationships_ == other.relationships_ &&
         rankings_ == other.rankings_ &&
         export_policy_ == other.export_policy_;
}

void Instance::index_topology() {
  const std::size_t n = names_.size();
  by_name_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    by_name_.emplace(names_[i], static_cast<NodeIndex>(i));
  }
  destination_ = find(destination_name_);
  adjacency_.assign(n, {});
  relation_.assign(n * n, std::nullopt);
  slot_.assign(n * n, -1);

  for (const auto& rel : relationships_) {
    if (rel.a == rel.b || rel.a >= n || rel.b >= n) continue;
    if (relation_[rel.a * n + rel.b]) continue;
    if (rel.kind == Relationship::Kind::kPeer) {
      relation_[rel.a * n + rel.b] = Relation::kPeer;
      relation_[rel.b * n + rel.a] = Relation::kPeer;
    } else {
      relation_[rel.a * n + rel.b] = Relation::kProvider;  // b is a's provider
      relation_[rel.b * n + rel.a] = Relation::kCustomer;
    }
    adjacency_[rel.a].push_back(rel.b);
    adjacency_[rel.b].push_back(rel.a);
  }
  for (std::size_t u = 0; u < n; ++u) {
    auto& list = adjacency_[u];
    std::sort(list.begin(), list.end());
    for (std::size_t s = 0; s < list.size(); ++s) {
      slot_[u * n + list[s]] = static_cast<std::int32_t>(s);
    }
  }
}

InstanceBuilder::InstanceBuilder(const Instance& base) : draft_(base) {}

NodeIndex InstanceBuilder::add_node(std::string name) {
  if (draft_.names_.size() >= 0xFFFF) throw ModelError("too many nodes");
  draft_.names_.push_back(name);
  auto index = static_cast<NodeIndex>(draft_.names_.size() - 1);
  draft_.by_name_.emplace(std::move(name), index);
  return index;
}

InstanceBuilder& InstanceBuilder::destination(std::string name) {
  draft_.destination_name_ = std::move(name);
  return *this;
}

InstanceBuilder& InstanceBuilder::mode(Mode mode) {
  draft_.mode_ = mode;
  return *this;
}

NodeIndex InstanceBuilder::index(std::string_view name) const {
  auto it = draft_.by_name_.find(name);
  if (it == draft_.by_name_.end()) {
    throw ModelError("unknown node '" + std::string(name) + "'");
  }
  return it->second;
}

InstanceBuilder& InstanceBuilder::customer_of(std::string_view customer,
                                              std::string_view provider) {
  return relationship(Relationship::customer_of(index(customer), index(provider)));
}

InstanceBuilder& InstanceBuilder::peers(std::string_view a, std::string_view b) {
  return relationship(Relationship::peers(index(a), index(b)));
}

InstanceBuilder& InstanceBuilder::relationship(Relationship relationship) {
  draft_.relationships_.push_back(relationship);
  return *this;
}

Path InstanceBuilder::path(std::initializer_list<std::string_view> names) const {
  std::vector<NodeIndex> nodes;
  for (auto name : names) nodes.push_back(index(name));
  return Path(std::move(nodes));
}

Path InstanceBuilder::path(const std::vector<std::string>& names) const {
  std::vector<NodeIndex> nodes;
  for (const auto& name : names) nodes.push_back(index(name));
  return Path(std::move(nodes));
}

InstanceBuilder& InstanceBuilder::ranking(std::string_view owner,
                                          std::vector<Path> acceptable) {
  return ranking(RankingKey{index(owner), std::nullopt}, std::move(acceptable));
}

InstanceBuilder& InstanceBuilder::ranking(std::string_view owner,
                                          std::string_view neighbor,
                                          std::vector<Path> acceptable) {
  return ranking(RankingKey{index(owner), index(neighbor)},
                 std::move(acceptable));
}

InstanceBuilder& InstanceBuilder::ranking(RankingKey key,
                                          std::vector<Path> acceptable) {
  draft_.rankings_.insert_or_assign(key,
                                    RankingFunction(key.owner, std::move(acceptable)));
  return *this;
}

InstanceBuilder& InstanceBuilder::clear_rankings() {
  draft_.rankings_.clear();
  return *this;
}

InstanceBuilder& InstanceBuilder::export_policy(ExportPolicy policy) {
  draft_.export_policy_ = std::move(policy);
  return *this;
}

Instance InstanceBuilder::build() const {
  Instance out = draft_;
  out.index_topology();
  return out;
}

bool ValidationReport::has(std::string_view what) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.what == what; });
}

namespace {

std::string key_label(const Instance& inst, const RankingKey& key) {
  std::string label = "ranking " + inst.name(key.owner);
  if (key.neighbor) label += "->" + inst.name(*key.neighbor);
  return label;
}

void check_path(const Instance& inst, const RankingKey& key, const Path& path,
                ValidationReport& report) {
  const std::string where = key_label(inst, key) + " path " + inst.render(path);
  if (path.empty()) {
    report.violations.push_back({"empty path listed", where});
    return;
  }
  if (path.head() != key.owner) {
    report.violations.push_back({"path does not start at owner", where});
  }
  if (!inst.destination() || path.last() != *inst.destination()) {
    report.violations.push_back({"path does not end at destination", where});
  }
  if (!path.is_simple()) {
    report.violations.push_back({"path repeats a node", where});
  }
  auto nodes = path.nodes();
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (!inst.adjacent(nodes[i], nodes[i + 1])) {
      report.violations.push_back(
          {"path uses non-edge",
           where + ": " + inst.name(nodes[i]) + "-" + inst.name(nodes[i + 1])});
    }
  }
}

}  // namespace

ValidationReport validate(const Instance& inst) {
  ValidationReport report;
  const std::size_t n = inst.node_count();

  std::set<std::string_view> seen;
  for (const auto& name : inst.names()) {
    if (name.empty()) report.violations.push_back({"empty node name", ""});
    if (!seen.insert(name).second) {
      report.violations.push_back({"duplicate node", name});
    }
    if (name.find("->") != std::string::npos ||
        name.find("\u2192") != std::string::npos) {
      report.violations.push_back({"reserved characters in node name", name});
    }
  }
  if (!inst.destination()) {
    report.violations.push_back(
        {"destination missing", "'" + inst.destination_name() + "'"});
  }

  std::set<std::pair<NodeIndex, NodeIndex>> pairs;
  for (const auto& rel : inst.relationships()) {
    if (rel.a >= n || rel.b >= n) {
      report.violations.push_back({"relationship names unknown node", ""});
      continue;
    }
    const std::string where = inst.name(rel.a) + "-" + inst.name(rel.b);
    if (rel.a == rel.b) {
      report.violations.push_back({"self relationship", where});
      continue;
    }
    auto key = std::minmax(rel.a, rel.b);
    if (!pairs.insert({key.first, key.second}).second) {
      report.violations.push_back({"duplicate relationship", where});
    }
  }

  for (const auto& [key, ranking] : inst.rankings()) {
    if (key.owner >= n) continue;
    if (inst.destination() && key.owner == *inst.destination()) {
      report.violations.push_back(
          {"destination has a ranking", key_label(inst, key)});
    }
    if (key.neighbor) {
      if (inst.mode() != Mode::kNeighborSpecific) {
        report.violations.push_back(
            {"per-neighbor ranking outside neighbor-specific mode",
             key_label(inst, key)});
      }
      if (!inst.adjacent(key.owner, *key.neighbor)) {
        report.violations.push_back(
            {"ranking for non-adjacent neighbor", key_label(inst, key)});
      }
    }
    std::set<Path> listed;
    for (const auto& path : ranking.acceptable()) {
      check_path(inst, key, path, report);
      if (!listed.insert(path).second) {
        report.violations.push_back(
            {"duplicate path in ranking",
             key_label(inst, key) + " path " + inst.render(path)});
      }
    }
  }

  for (std::size_t u = 0; u < n; ++u) {
    auto node = static_cast<NodeIndex>(u);
    if (inst.destination() && node == *inst.destination()) continue;
    if (!inst.node_ranking(node)) {
      report.violations.push_back(
          {inst.mode() == Mode::kNeighborSpecific ? "missing self ranking"
                                                  : "missing ranking",
           inst.name(node)});
    }
    if (inst.mode() == Mode::kNeighborSpecific) {
      for (NodeIndex v : inst.neighbors(node)) {
        if (!inst.neighbor_ranking(node, v)) {
          report.violations.push_back(
              {"missing neighbor ranking", inst.name(node) + "->" + inst.name(v)});
        }
      }
    }
  }

  if (auto* rules = std::get_if<ExplicitExport>(&inst.export_policy())) {
    for (const auto& rule : rules->rules) {
      if (rule.from >= n || rule.to >= n || !inst.adjacent(rule.from, rule.to)) {
        report.violations.push_back(
            {"export rule for non-adjacent pair",
             (rule.from < n ? inst.name(rule.from) : "?") + "->" +
                 (rule.to < n ? inst.name(rule.to) : "?")});
      }
    }
  }

  if (inst.destination()) {
    std::vector<bool> reached(n, false);
    std::queue<NodeIndex> frontier;
    frontier.push(*inst.destination());
    reached[*inst.destination()] = true;
    while (!frontier.empty()) {
      auto u = frontier.front();
      frontier.pop();
      for (NodeIndex v : inst.neighbors(u)) {
        if (!reached[v]) {
          reached[v] = true;
          frontier.push(v);
        }
      }
    }
    for (std::size_t u = 0; u < n; ++u) {
      if (!reached[u]) {
        report.warnings.push_back("node " + inst.name(static_cast<NodeIndex>(u)) +
                                  " is disconnected from the destination");
      }
    }
  }
  return report;
}

Instance with_mode(const Instance& instance, Mode mode) {
  InstanceBuilder builder(instance);
  builder.mode(mode);
  const bool was_ns = instance.mode() == Mode::kNeighborSpecific;
  const bool to_ns = mode == Mode::kNeighborSpecific;
  if (was_ns == to_ns) return builder.build();

  builder.clear_rankings();
  for (const auto& [key, ranking] : instance.rankings()) {
    if (key.neighbor) continue;
    builder.ranking(key, ranking.acceptable());
    if (to_ns) {
      for (NodeIndex v : instance.neighbors(key.owner)) {
        builder.ranking(RankingKey{key.owner, v}, ranking.acceptable());
      }
    }
  }
  return builder.build();
}

}  // namespace nsbgp
