#include <algorithm>
#include <limits>

#include "p2pnet/errors.hpp"
#include "p2pnet/generators.hpp"

namespace p2pnet {

namespace {

constexpr NodeId kNotPeer = std::numeric_limits<NodeId>::max();

// Depth-limited BFS with reusable scratch; lists overlay peers met within
// `depth` hops (excluding the start node) in BFS order.
class HorizonScanner {
 public:
  explicit HorizonScanner(const Graph& substrate)
      : substrate_(substrate), stamp_(substrate.node_count(), 0), depth_(substrate.node_count(), 0) {}

  void scan(NodeId start, std::size_t depth, const std::vector<NodeId>& overlay_of, std::vector<NodeId>& peers) {
    peers.clear();
    queue_.clear();
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
    stamp_[start] = epoch_;
    depth_[start] = 0;
    queue_.push_back(start);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const NodeId u = queue_[head];
      if (overlay_of[u] != kNotPeer && u != start) peers.push_back(overlay_of[u]);
      if (depth_[u] == depth) continue;
      for (NodeId v : substrate_.neighbors(u)) {
        if (stamp_[v] == epoch_) continue;
        stamp_[v] = epoch_;
        depth_[v] = depth_[u] + 1;
        queue_.push_back(v);
      }
    }
  }

 private:
  const Graph& substrate_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> depth_;
  std::vector<NodeId> queue_;
  std::uint32_t epoch_ = 0;
};

}  // namespace

DapaResult build_dapa_overlay(const GeneratorConfig& cfg, const Graph& substrate, Rng& rng) {
  const std::size_t n_sub = substrate.node_count();
  const std::size_t n_overlay = cfg.n_nodes;
  const std::size_t m = cfg.stubs;
  if (n_overlay < 2) throw InputError("DAPA needs N_O >= 2");
  if (n_overlay > n_sub) throw InputError("DAPA needs N_O <= N_S");
  if (cfg.hard_cutoff && *cfg.hard_cutoff <= m) throw InputError("hard cutoff must exceed m");
  if (cfg.tau_sub < 1) throw InputError("tau_sub must be >= 1");

  DapaResult out{Graph(n_overlay), {}};
  out.substrate_node_of.reserve(n_overlay);
  std::vector<NodeId> overlay_of(n_sub, kNotPeer);

  auto join = [&](NodeId s) {
    const auto id = static_cast<NodeId>(out.substrate_node_of.size());
    overlay_of[s] = id;
    out.substrate_node_of.push_back(s);
    return id;
  };

  // Two random seed peers joined by one overlay link.
  const auto first = static_cast<NodeId>(rng.index(n_sub));
  NodeId second = first;
  while (second == first) second = static_cast<NodeId>(rng.index(n_sub));
  out.overlay.add_edge(join(first), join(second));

  HorizonScanner scanner(substrate);
  std::vector<NodeId> raw;
  std::vector<NodeId> horizon;
  auto fill_horizon = [&](NodeId s) {
    scanner.scan(s, cfg.tau_sub, overlay_of, raw);
    horizon.clear();
    for (NodeId p : raw) {
      if (!cfg.hard_cutoff || out.overlay.degree(p) < *cfg.hard_cutoff) horizon.push_back(p);
    }
  };

  const std::uint64_t give_up = 50 * static_cast<std::uint64_t>(n_sub);
  std::uint64_t idle = 0;
  while (out.substrate_node_of.size() < n_overlay) {
    const auto candidate = static_cast<NodeId>(rng.index(n_sub));
    if (overlay_of[candidate] == kNotPeer) fill_horizon(candidate);
    if (overlay_of[candidate] != kNotPeer || horizon.empty()) {
      if (++idle < give_up) continue;
      idle = 0;
      bool any = false;
      for (NodeId s = 0; s < n_sub && !any; ++s) {
        if (overlay_of[s] != kNotPeer) continue;
        fill_horizon(s);
        any = !horizon.empty();
      }
      if (!any) {
        throw GenerationError("DAPA: no remaining substrate node sees a peer within tau_sub=" +
                                  std::to_string(cfg.tau_sub) + " hops; reached " +
                                  std::to_string(out.substrate_node_of.size()) + " of " +
                                  std::to_string(n_overlay) + " peers",
                              out.substrate_node_of.size());
      }
      continue;
    }
    idle = 0;

    const NodeId joiner = join(candidate);
    if (horizon.size() <= m) {
      for (NodeId p : horizon) out.overlay.add_edge(joiner, p);
      continue;
    }

    // Degree-proportional choice normalized over the horizon only.
    std::uint64_t horizon_total = 0;
    std::uint64_t horizon_max = 0;
    for (NodeId p : horizon) {
      horizon_total += out.overlay.degree(p);
      horizon_max = std::max<std::uint64_t>(horizon_max, out.overlay.degree(p));
    }
    for (std::size_t j = 0; j < m; ++j) {
      const std::uint64_t norm = cfg.acceptance == AcceptanceBound::MaxDegree ? horizon_max : horizon_total;
      const auto pick = preferential_pick(out.overlay, horizon, joiner, cfg.hard_cutoff, rng, norm);
      if (!pick) break;  // unreachable: |horizon| > m distinct eligible peers
      out.overlay.add_edge(joiner, *pick);
      ++horizon_total;
      horizon_max = std::max<std::uint64_t>(horizon_max, out.overlay.degree(*pick));
    }
  }
  return out;
}

DapaBuild generate_dapa(const GeneratorConfig& cfg, Rng& rng) {
  cfg.validate();
  DapaBuild build{generate_substrate(*cfg.substrate), {}};
  build.overlay = build_dapa_overlay(cfg, build.substrate.graph, rng);
  return build;
}

}  // namespace p2pnet
