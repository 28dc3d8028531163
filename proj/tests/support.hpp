#pragma once

// Small graph builders and brute-force oracles shared by the unit tests.

#include <cstdint>
#include <limits>
#include <vector>

#include "p2pnet/graph.hpp"
#include "p2pnet/rng.hpp"

namespace p2pnet::testing {

inline constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

inline Graph path_graph(std::size_t n) {
  Graph g(n);
  for (NodeId u = 0; u + 1 < n; ++u) g.add_edge(u, u + 1);
  return g;
}

inline Graph ring_graph(std::size_t n) {
  Graph g = path_graph(n);
  g.add_edge(0, static_cast<NodeId>(n - 1));
  return g;
}

/// Node 0 is the center.
inline Graph star_graph(std::size_t n) {
  Graph g(n);
  for (NodeId u = 1; u < n; ++u) g.add_edge(0, u);
  return g;
}

inline Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

/// Erdos-Renyi G(n, p).
inline Graph random_graph(std::size_t n, double p, Rng& rng) {
  Graph g(n);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.uniform() < p) g.add_edge(u, v);
    }
  }
  return g;
}

/// All-pairs hop distances; kInf for unreachable pairs.
inline std::vector<std::vector<std::uint32_t>> floyd_warshall(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::uint64_t>> d(n, std::vector<std::uint64_t>(n, kInf));
  for (std::size_t u = 0; u < n; ++u) {
    d[u][u] = 0;
    for (NodeId v : g.neighbors(static_cast<NodeId>(u))) d[u][v] = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      }
    }
  }
  std::vector<std::vector<std::uint32_t>> out(n, std::vector<std::uint32_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i][j] = static_cast<std::uint32_t>(d[i][j]);
  }
  return out;
}

}  // namespace p2pnet::testing
