#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nsbgp/model.hpp"

namespace nsbgp {

/// Per-node protocol state. `exported` is parallel to
/// Instance::neighbors(node) (neighbors sorted, so the layout is canonical).
struct NodeState {
  Path own;
  std::vector<Path> exported;

  auto operator<=>(const NodeState&) const = default;
};

/// Global state of the routing system. rib_in is not stored separately:
/// with instantaneous visibility, u's rib_in from v is exactly what v
/// currently exports to u.
class ProtocolState {
 public:
  ProtocolState() = default;
  explicit ProtocolState(const Instance& instance);

  std::size_t size() const { return nodes_.size(); }
  const NodeState& node(NodeIndex u) const { return nodes_.at(u); }
  NodeState& node(NodeIndex u) { return nodes_.at(u); }

  const Path& own(NodeIndex u) const { return nodes_.at(u).own; }
  /// What u currently announces to neighbor v.
  const Path& exported(const Instance& instance, NodeIndex u,
                       NodeIndex v) const;
  /// Latest route v announces to u.
  const Path& rib_in(const Instance& instance, NodeIndex u,
                     NodeIndex v) const {
    return exported(instance, v, u);
  }

  void set_exported(const Instance& instance, NodeIndex u, NodeIndex v,
                    Path path);

  std::uint64_t hash() const;
  /// Hex digest of the canonical form, for graph export.
  std::string digest() const;

  auto operator<=>(const ProtocolState&) const = default;

 private:
  std::vector<NodeState> nodes_;
};

struct ProtocolStateHash {
  std::size_t operator()(const ProtocolState& state) const {
    return static_cast<std::size_t>(state.hash());
  }
};

}  // namespace nsbgp
