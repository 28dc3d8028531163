#include "p2pnet/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "p2pnet/errors.hpp"
#include "p2pnet/rng.hpp"

namespace p2pnet {

void Graph::require_node(NodeId u) const {
  if (u >= adjacency_.size()) {
    throw InputError("node id " + std::to_string(u) + " out of range (N=" +
                     std::to_string(adjacency_.size()) + ")");
  }
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  require_node(u);
  require_node(v);
  const auto& a = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
  const NodeId other = (&a == &adjacency_[u]) ? v : u;
  return std::binary_search(a.begin(), a.end(), other);
}

bool Graph::add_edge(NodeId u, NodeId v) {
  require_node(u);
  require_node(v);
  if (u == v) return false;
  auto& au = adjacency_[u];
  auto pos = std::lower_bound(au.begin(), au.end(), v);
  if (pos != au.end() && *pos == v) return false;
  au.insert(pos, v);
  auto& av = adjacency_[v];
  av.insert(std::lower_bound(av.begin(), av.end(), u), u);
  total_degree_ += 2;
  max_degree_ = std::max({max_degree_, au.size(), av.size()});
  return true;
}

void Graph::check_invariants() const {
  std::uint64_t sum = 0;
  std::size_t max_k = 0;
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    const auto& a = adjacency_[u];
    if (!std::is_sorted(a.begin(), a.end()) || std::adjacent_find(a.begin(), a.end()) != a.end()) {
      throw std::logic_error("parallel edge at node " + std::to_string(u));
    }
    for (NodeId v : a) {
      if (v == u) throw std::logic_error("self-loop at node " + std::to_string(u));
      if (v >= adjacency_.size()) throw std::logic_error("dangling neighbor id");
      if (!std::binary_search(adjacency_[v].begin(), adjacency_[v].end(), u)) {
        throw std::logic_error("asymmetric edge " + std::to_string(u) + "-" + std::to_string(v));
      }
    }
    sum += a.size();
    max_k = std::max(max_k, a.size());
  }
  if (sum != total_degree_) throw std::logic_error("total_degree out of sync");
  if (max_k != max_degree_) throw std::logic_error("max_degree out of sync");
}

DistanceMap bfs_distances(const Graph& g, NodeId source) {
  if (source >= g.node_count()) throw InputError("bfs source out of range");
  DistanceMap out{source, std::vector<std::optional<std::uint32_t>>(g.node_count())};
  std::vector<NodeId> frontier{source};
  out.dist[source] = 0;
  std::size_t head = 0;
  while (head < frontier.size()) {
    const NodeId u = frontier[head++];
    const std::uint32_t du = *out.dist[u];
    for (NodeId v : g.neighbors(u)) {
      if (!out.dist[v]) {
        out.dist[v] = du + 1;
        frontier.push_back(v);
      }
    }
  }
  return out;
}

namespace {

// Labels every node with the index of its component (in order of the
// lowest contained id) and returns the component sizes.
std::vector<std::size_t> label_components(const Graph& g, std::vector<std::uint32_t>& label) {
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  label.assign(g.node_count(), kUnset);
  std::vector<std::size_t> sizes;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (label[s] != kUnset) continue;
    const auto id = static_cast<std::uint32_t>(sizes.size());
    std::size_t size = 0;
    label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      ++size;
      for (NodeId v : g.neighbors(u)) {
        if (label[v] == kUnset) {
          label[v] = id;
          stack.push_back(v);
        }
      }
    }
    sizes.push_back(size);
  }
  return sizes;
}

}  // namespace

std::vector<std::size_t> component_sizes(const Graph& g) {
  std::vector<std::uint32_t> label;
  return label_components(g, label);
}

Component giant_component(const Graph& g) {
  std::vector<std::uint32_t> label;
  const auto sizes = label_components(g, label);
  Component out{0, std::vector<bool>(g.node_count(), false)};
  if (sizes.empty()) return out;
  // max_element returns the first maximum, i.e. the lowest-id component.
  const auto best = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  out.size = sizes[best];
  for (NodeId u = 0; u < g.node_count(); ++u) out.membership[u] = (label[u] == best);
  return out;
}

double approx_avg_shortest_path(const Graph& g, std::size_t sample_sources, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  if (n < 2 || sample_sources == 0) throw InputError("need at least 2 nodes and 1 sampled source");
  if (g.edge_count() == 0) throw DegenerateInputError("average shortest path undefined on a graph without edges");

  std::vector<NodeId> sources;
  if (sample_sources >= n) {
    sources.resize(n);
    for (NodeId u = 0; u < n; ++u) sources[u] = u;
  } else {
    Rng rng(seed);
    for (std::size_t i = 0; i < sample_sources; ++i) sources.push_back(static_cast<NodeId>(rng.index(n)));
  }

  double sum = 0.0;
  std::uint64_t pairs = 0;
  for (NodeId s : sources) {
    const auto dm = bfs_distances(g, s);
    for (NodeId v = 0; v < n; ++v) {
      if (v != s && dm.dist[v]) {
        sum += *dm.dist[v];
        ++pairs;
      }
    }
  }
  if (pairs == 0) throw DegenerateInputError("no reachable pairs from the sampled sources");
  return sum / static_cast<double>(pairs);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << "# nodes " << g.node_count() << '\n';
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v) out << u << ' ' << v << '\n';
    }
  }
}

Graph read_edge_list(std::istream& in) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::optional<std::size_t> declared;
  std::size_t max_id_plus_one = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream hs(line.substr(first + 1));
      std::string key;
      std::size_t value = 0;
      if (hs >> key && key == "nodes" && hs >> value) declared = value;
      continue;
    }
    std::istringstream ls(line);
    long long u = -1;
    long long v = -1;
    std::string rest;
    if (!(ls >> u >> v) || u < 0 || v < 0 || (ls >> rest && rest[0] != '#')) {
      throw InputError("malformed edge on line " + std::to_string(line_no) + ": '" + line + "'");
    }
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    max_id_plus_one = std::max<std::size_t>(max_id_plus_one, static_cast<std::size_t>(std::max(u, v)) + 1);
  }
  const std::size_t n = declared ? std::max(*declared, max_id_plus_one) : max_id_plus_one;
  Graph g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_edge_list(g, out);
  if (!out) throw IoError("write failed: " + path);
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_edge_list(in);
}

}  // namespace p2pnet
