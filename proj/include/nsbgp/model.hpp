#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nsbgp {

/// Dense index of a node within one Instance. Node names live on the
/// Instance; everything hot (paths, states) works on indices.
using NodeIndex = std::uint16_t;

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { kConventional, kFilterFirst, kNeighborSpecific };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// What a neighbor is, seen from the node doing the lookup.
enum class Relation { kCustomer, kPeer, kProvider };

std::string_view to_string(Relation relation);
Relation parse_relation(std::string_view text);

struct Relationship {
  enum class Kind { kCustomerProvider, kPeer };
  // For kCustomerProvider, `a` is the customer and `b` the provider.
  NodeIndex a = 0;
  NodeIndex b = 0;
  Kind kind = Kind::kPeer;

  static Relationship customer_of(NodeIndex customer, NodeIndex provider) {
    return {customer, provider, Kind::kCustomerProvider};
  }
  static Relationship peers(NodeIndex a, NodeIndex b) {
    return {a, b, Kind::kPeer};
  }

  auto operator<=>(const Relationship&) const = default;
};

/// AS-level route. A default-constructed Path is the EMPTY sentinel
/// (no route / withdrawal).
class Path {
 public:
  Path() = default;
  explicit Path(std::vector<NodeIndex> nodes) : nodes_(std::move(nodes)) {}
  Path(std::initializer_list<NodeIndex> nodes) : nodes_(nodes) {}

  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  std::span<const NodeIndex> nodes() const { return nodes_; }

  NodeIndex head() const { return nodes_.front(); }
  NodeIndex last() const { return nodes_.back(); }
  /// Node after the head, if any.
  std::optional<NodeIndex> next_hop() const {
    if (nodes_.size() < 2) return std::nullopt;
    return nodes_[1];
  }
  bool contains(NodeIndex node) const;
  bool is_simple() const;
  /// Path with the head removed (what the next hop announced).
  Path tail() const;

  auto operator<=>(const Path&) const = default;

 private:
  std::vector<NodeIndex> nodes_;
};

/// Prepends `via` to a neighbor's route. EMPTY routes and routes that
/// already traverse `via` are rejected (nullopt).
std::optional<Path> extend(const Path& neighbor_path, NodeIndex via);

/// Strict preference order over a node's acceptable paths. EMPTY sits
/// implicitly after the last listed path; unlisted paths are unacceptable.
class RankingFunction {
 public:
  RankingFunction() = default;
  RankingFunction(NodeIndex owner, std::vector<Path> acceptable);

  NodeIndex owner() const { return owner_; }
  const std::vector<Path>& acceptable() const { return acceptable_; }

  /// 0 is most preferred; EMPTY ranks at acceptable().size().
  std::optional<std::size_t> rank(const Path& path) const;
  bool accepts(const Path& path) const { return rank(path).has_value(); }

  bool operator==(const RankingFunction& other) const {
    return owner_ == other.owner_ && acceptable_ == other.acceptable_;
  }

 private:
  NodeIndex owner_ = 0;
  std::vector<Path> acceptable_;
  std::map<Path, std::size_t> index_;
};

/// neighbor == nullopt addresses λ^u (CONVENTIONAL / FILTER_FIRST) or the
/// self ranking λ^u_self (NEIGHBOR_SPECIFIC).
struct RankingKey {
  NodeIndex owner = 0;
  std::optional<NodeIndex> neighbor;

  auto operator<=>(const RankingKey&) const = default;
};

enum class LearnedClass { kCustomer, kPeer, kProvider, kOrigin };

struct ExportRule {
  enum class Action { kAllow, kDeny };
  NodeIndex from = 0;
  NodeIndex to = 0;
  Action action = Action::kDeny;
  std::variant<LearnedClass, Path> match;

  bool operator==(const ExportRule&) const = default;
};

struct GaoRexfordExport {
  bool operator==(const GaoRexfordExport&) const = default;
};
struct ExplicitExport {
  std::vector<ExportRule> rules;  // first match wins, default deny
  bool operator==(const ExplicitExport&) const = default;
};
using ExportPolicy = std::variant<GaoRexfordExport, ExplicitExport>;

/// An interdomain routing instance for a single destination.
///
/// Instances are built through InstanceBuilder and are immutable
/// afterwards. Construction only rejects data that cannot be represented
/// (unknown node names); every semantic invariant is reported by
/// validate() instead, so broken inputs can be inspected.
class Instance {
 public:
  std::size_t node_count() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(NodeIndex node) const { return names_.at(node); }
  std::optional<NodeIndex> find(std::string_view name) const;
  NodeIndex index(std::string_view name) const;  // throws ModelError

  /// Destination label as configured; may name a node that does not exist.
  const std::string& destination_name() const { return destination_name_; }
  std::optional<NodeIndex> destination() const { return destination_; }
  /// Destination index; throws if the destination is missing.
  NodeIndex dest() const;

  Mode mode() const { return mode_; }
  const std::vector<Relationship>& relationships() const {
    return relationships_;
  }
  const std::map<RankingKey, RankingFunction>& rankings() const {
    return rankings_;
  }
  const ExportPolicy& export_policy() const { return export_policy_; }

  /// Sorted neighbor list.
  std::span<const NodeIndex> neighbors(NodeIndex node) const {
    return adjacency_.at(node);
  }
  bool adjacent(NodeIndex a, NodeIndex b) const;
  /// Position of `neighbor` within neighbors(node); nullopt if not adjacent.
  std::optional<std::size_t> neighbor_slot(NodeIndex node,
                                           NodeIndex neighbor) const;
  /// What `neighbor` is to `node`. First configured relationship wins when
  /// duplicates exist (validate() reports them).
  std::optional<Relation> relation(NodeIndex node, NodeIndex neighbor) const;

  const RankingFunction* ranking(const RankingKey& key) const;
  /// λ^u in CONVENTIONAL / FILTER_FIRST, λ^u_self in NEIGHBOR_SPECIFIC.
  const RankingFunction* node_ranking(NodeIndex owner) const {
    return ranking({owner, std::nullopt});
  }
  const RankingFunction* neighbor_ranking(NodeIndex owner,
                                          NodeIndex neighbor) const {
    return ranking({owner, neighbor});
  }

  std::string render(const Path& path) const;  // "(1 3 d)"

  bool operator==(const Instance& other) const;

 private:
  friend class InstanceBuilder;
  void index_topology();

  std::vector<std::string> names_;
  std::map<std::string, NodeIndex, std::less<>> by_name_;
  std::string destination_name_;
  std::optional<NodeIndex> destination_;
  Mode mode_ = Mode::kConventional;
  std::vector<Relationship> relationships_;
  std::map<RankingKey, RankingFunction> rankings_;
  ExportPolicy export_policy_ = GaoRexfordExport{};

  std::vector<std::vector<NodeIndex>> adjacency_;
  std::vector<std::optional<Relation>> relation_;  // n*n
  std::vector<std::int32_t> slot_;                 // n*n, -1 if absent
};

class InstanceBuilder {
 public:
  InstanceBuilder() = default;
  explicit InstanceBuilder(const Instance& base);

  NodeIndex add_node(std::string name);
  InstanceBuilder& destination(std::string name);
  InstanceBuilder& mode(Mode mode);
  InstanceBuilder& customer_of(std::string_view customer,
                               std::string_view provider);
  InstanceBuilder& peers(std::string_view a, std::string_view b);
  InstanceBuilder& relationship(Relationship relationship);
  /// `path` given by node names; an empty list is the EMPTY path.
  Path path(std::initializer_list<std::string_view> names) const;
  Path path(const std::vector<std::string>& names) const;
  InstanceBuilder& ranking(std::string_view owner, std::vector<Path> acceptable);
  InstanceBuilder& ranking(std::string_view owner, std::string_view neighbor,
                           std::vector<Path> acceptable);
  InstanceBuilder& ranking(RankingKey key, std::vector<Path> acceptable);
  InstanceBuilder& clear_rankings();
  InstanceBuilder& export_policy(ExportPolicy policy);

  NodeIndex index(std::string_view name) const;

  Instance build() const;

 private:
  Instance draft_;
};

struct Violation {
  std::string what;     // short category, e.g. "path uses non-edge"
  std::string witness;  // located detail
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view what) const;
};

ValidationReport validate(const Instance& instance);

/// Re-targets an instance at another selection mode. CONVENTIONAL and
/// FILTER_FIRST share rankings; moving to NEIGHBOR_SPECIFIC copies λ^u into
/// every λ^u_v and λ^u_self, moving away keeps the self rankings as λ^u.
Instance with_mode(const Instance& instance, Mode mode);

}  // namespace nsbgp
