// Degree-proportional attachment: the shared pick loop, PA and HAPA.

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <numeric>

#include "p2pnet/errors.hpp"
#include "p2pnet/generators.hpp"

namespace p2pnet {

std::string to_string(Model m) {
  switch (m) {
    case Model::PA: return "PA";
    case Model::CM: return "CM";
    case Model::HAPA: return "HAPA";
    case Model::DAPA: return "DAPA";
  }
  return "?";
}

Model parse_model(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  if (upper == "PA") return Model::PA;
  if (upper == "CM") return Model::CM;
  if (upper == "HAPA") return Model::HAPA;
  if (upper == "DAPA") return Model::DAPA;
  throw InputError("unknown model '" + name + "' (expected PA, CM, HAPA or DAPA)");
}

void GeneratorConfig::validate() const {
  if (stubs < 1) throw InputError("m must be >= 1");
  if (hard_cutoff && *hard_cutoff <= stubs) {
    throw InputError("hard cutoff k_c=" + std::to_string(*hard_cutoff) + " must exceed m=" + std::to_string(stubs));
  }
  switch (model) {
    case Model::PA:
    case Model::HAPA:
      if (n_nodes < stubs + 2) throw InputError("PA/HAPA need N >= m+2");
      break;
    case Model::CM:
      if (!(gamma_target > 1.0)) throw InputError("CM needs gamma_target > 1");
      break;
    case Model::DAPA:
      if (!substrate) throw InputError("DAPA needs a substrate");
      if (tau_sub < 1) throw InputError("tau_sub must be >= 1");
      if (n_nodes < 2) throw InputError("DAPA needs N_O >= 2");
      if (n_nodes > substrate->n_substrate) throw InputError("DAPA needs N_O <= N_S");
      break;
  }
}

namespace {

bool eligible(const Graph& g, NodeId c, NodeId joiner, std::optional<std::size_t> cutoff) {
  if (c == joiner) return false;
  const std::size_t k = g.degree(c);
  if (k == 0) return false;
  if (cutoff && k >= *cutoff) return false;
  return !g.has_edge(joiner, c);
}

std::optional<NodeId> roulette_pick(const Graph& g, std::span<const NodeId> candidates, NodeId joiner,
                                    std::optional<std::size_t> cutoff, Rng& rng) {
  std::uint64_t total = 0;
  for (NodeId c : candidates) {
    if (eligible(g, c, joiner, cutoff)) total += g.degree(c);
  }
  if (total == 0) return std::nullopt;
  std::uint64_t target = rng.index(total);
  for (NodeId c : candidates) {
    if (!eligible(g, c, joiner, cutoff)) continue;
    const std::uint64_t k = g.degree(c);
    if (target < k) return c;
    target -= k;
  }
  return std::nullopt;  // unreachable
}

void seed_clique(Graph& g, std::size_t size) {
  for (NodeId u = 0; u < size; ++u) {
    for (NodeId v = u + 1; v < size; ++v) g.add_edge(u, v);
  }
}

}  // namespace

std::optional<NodeId> preferential_pick(const Graph& g, std::span<const NodeId> candidates, NodeId joiner,
                                        std::optional<std::size_t> cutoff, Rng& rng,
                                        std::uint64_t acceptance_norm) {
  if (candidates.empty()) return std::nullopt;
  const std::uint64_t norm = acceptance_norm != 0 ? acceptance_norm : g.total_degree();
  if (norm == 0) return std::nullopt;

  const std::uint64_t give_up = 50 * std::max<std::uint64_t>(g.node_count(), candidates.size());
  for (std::uint64_t rejected = 0; rejected < give_up; ++rejected) {
    const NodeId c = candidates[rng.index(candidates.size())];
    const double rnd = rng.uniform();
    const std::size_t k = g.degree(c);
    assert(k <= norm || !eligible(g, c, joiner, cutoff));
    if (rnd * static_cast<double>(norm) < static_cast<double>(k) && eligible(g, c, joiner, cutoff)) return c;
  }
  return roulette_pick(g, candidates, joiner, cutoff, rng);
}

Graph generate_pa(const GeneratorConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t n = cfg.n_nodes;
  const std::size_t m = cfg.stubs;
  Graph g(n);
  seed_clique(g, m + 1);

  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), NodeId{0});

  for (NodeId i = static_cast<NodeId>(m + 1); i < n; ++i) {
    const std::span<const NodeId> existing(ids.data(), i);
    for (std::size_t j = 0; j < m; ++j) {
      std::uint64_t norm = g.total_degree();
      if (cfg.acceptance == AcceptanceBound::MaxDegree) {
        norm = g.max_degree();
        if (cfg.hard_cutoff) norm = std::min<std::uint64_t>(norm, *cfg.hard_cutoff - 1);
      }
      const auto pick = preferential_pick(g, existing, i, cfg.hard_cutoff, rng, norm);
      if (!pick) {
        throw GenerationError("PA: node " + std::to_string(i) + " cannot place stub " + std::to_string(j + 1) +
                                  " (every existing node is at the cutoff or already linked)",
                              i);
      }
      g.add_edge(i, *pick);
    }
  }
  return g;
}

Graph generate_hapa(const GeneratorConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t n = cfg.n_nodes;
  const std::size_t m = cfg.stubs;
  Graph g(n);
  seed_clique(g, m + 1);

  // One Bernoulli attempt; the k / k_total rule is part of the hop dynamics
  // here, so the acceptance bound setting does not apply.
  auto attempt = [&](NodeId joiner, NodeId node) {
    const double rnd = rng.uniform();
    const std::size_t k = g.degree(node);
    if (node == joiner || g.has_edge(joiner, node)) return false;
    if (cfg.hard_cutoff && k >= *cfg.hard_cutoff) return false;
    if (!(rnd * static_cast<double>(g.total_degree()) < static_cast<double>(k))) return false;
    g.add_edge(joiner, node);
    return true;
  };

  const std::uint64_t give_up = 50 * static_cast<std::uint64_t>(n);
  for (NodeId i = static_cast<NodeId>(m + 1); i < n; ++i) {
    std::size_t placed = 0;
    if (attempt(i, static_cast<NodeId>(rng.index(i)))) ++placed;

    NodeId node = i;
    // A joiner whose first attempt failed has no link to hop along.
    if (g.degree(i) == 0) node = static_cast<NodeId>(rng.index(i));

    std::uint64_t failures = 0;
    while (placed < m) {
      const auto nbrs = g.neighbors(node);
      node = nbrs[rng.index(nbrs.size())];
      if (attempt(i, node)) {
        ++placed;
        failures = 0;
        continue;
      }
      if (++failures < give_up) continue;
      failures = 0;
      bool any = false;
      for (NodeId c = 0; c < i && !any; ++c) any = eligible(g, c, i, cfg.hard_cutoff);
      if (!any) {
        throw GenerationError("HAPA: node " + std::to_string(i) + " cannot place stub " +
                                  std::to_string(placed + 1) + " (no eligible node left)",
                              i);
      }
    }
  }
  return g;
}

}  // namespace p2pnet
