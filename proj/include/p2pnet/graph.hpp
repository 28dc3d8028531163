#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace p2pnet {

using NodeId = std::uint32_t;

/// Simple undirected graph over dense node ids 0..N-1.
///
/// Neighbor lists are kept sorted so membership is a binary search and
/// iteration order (and therefore every seeded computation) is stable.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t node_count) : adjacency_(node_count) {}

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return total_degree_ / 2; }
  std::uint64_t total_degree() const noexcept { return total_degree_; }
  std::size_t max_degree() const noexcept { return max_degree_; }

  std::size_t degree(NodeId u) const { return adjacency_[u].size(); }
  std::span<const NodeId> neighbors(NodeId u) const { return adjacency_[u]; }

  bool has_edge(NodeId u, NodeId v) const;

  /// Adds u-v. Returns false (and leaves the graph untouched) for a
  /// self-loop or an existing edge. Throws InputError on a bad id.
  bool add_edge(NodeId u, NodeId v);

  /// Throws std::logic_error naming the first violated invariant.
  void check_invariants() const;

 private:
  void require_node(NodeId u) const;

  std::vector<std::vector<NodeId>> adjacency_;
  std::uint64_t total_degree_ = 0;
  std::size_t max_degree_ = 0;
};

/// Hop distances from one source; unreachable nodes hold std::nullopt.
struct DistanceMap {
  NodeId source = 0;
  std::vector<std::optional<std::uint32_t>> dist;
};

DistanceMap bfs_distances(const Graph& g, NodeId source);

struct Component {
  std::size_t size = 0;
  std::vector<bool> membership;
};

/// Largest connected component; ties go to the one holding the lowest id.
Component giant_component(const Graph& g);

/// Sizes of every connected component, ordered by lowest contained id.
std::vector<std::size_t> component_sizes(const Graph& g);

/// Mean hop distance over (sampled source, reachable target) pairs. When
/// sample_sources >= N every node is used as a source and the result is
/// exact.
double approx_avg_shortest_path(const Graph& g, std::size_t sample_sources, std::uint64_t seed);

// Edge-list text format: one "u v" per line, '#' starts a comment. The
// writer emits a "# nodes N" header so isolated trailing nodes survive a
// round trip.
void write_edge_list(const Graph& g, std::ostream& out);
Graph read_edge_list(std::istream& in);
void save_edge_list(const Graph& g, const std::string& path);
Graph load_edge_list(const std::string& path);

}  // namespace p2pnet
