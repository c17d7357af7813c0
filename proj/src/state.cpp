#include "nsbgp/state.hpp"

#include <cstdio>

namespace nsbgp {

ProtocolState::ProtocolState(const Instance& instance)
    : nodes_(instance.node_count()) {
  for (std::size_t u = 0; u < nodes_.size(); ++u) {
    nodes_[u].exported.resize(instance.neighbors(static_cast<NodeIndex>(u)).size());
  }
}

const Path& ProtocolState::exported(const Instance& instance, NodeIndex u,
                                    NodeIndex v) const {
  auto slot = instance.neighbor_slot(u, v);
  if (!slot) {
    throw ModelError(instance.name(u) + " and " + instance.name(v) +
                     " are not adjacent");
  }
  return nodes_.at(u).exported.at(*slot);
}

void ProtocolState::set_exported(const Instance& instance, NodeIndex u,
                                 NodeIndex v, Path path) {
  auto slot = instance.neighbor_slot(u, v);
  if (!slot) {
    throw ModelError(instance.name(u) + " and " + instance.name(v) +
                     " are not adjacent");
  }
  nodes_.at(u).exported.at(*slot) = std::move(path);
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void mix(std::uint64_t& h, std::uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xFF;
    h *= kFnvPrime;
  }
}

void mix_path(std::uint64_t& h, const Path& path) {
  mix(h, path.size());
  for (NodeIndex n : path.nodes()) mix(h, n);
}

}  // namespace

std::uint64_t ProtocolState::hash() const {
  std::uint64_t h = kFnvOffset;
  for (const auto& node : nodes_) {
    mix_path(h, node.own);
    mix(h, node.exported.size());
    for (const auto& p : node.exported) mix_path(h, p);
  }
  return h;
}

std::string ProtocolState::digest() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash()));
  return buf;
}

}  // namespace nsbgp
