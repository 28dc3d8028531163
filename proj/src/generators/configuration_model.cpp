#include <cmath>
#include <numeric>

#include "p2pnet/errors.hpp"
#include "p2pnet/generators.hpp"

namespace p2pnet {

std::uint64_t DegreeSequence::sum() const {
  return std::accumulate(degrees.begin(), degrees.end(), std::uint64_t{0});
}

DegreeSequence sample_powerlaw_degree_sequence(std::size_t n, std::size_t m, double gamma, std::size_t k_c,
                                               Rng& rng) {
  if (m < 1) throw InputError("degree sequence needs m >= 1");
  if (!(gamma > 1.0)) throw InputError("degree sequence needs gamma > 1");
  if (k_c <= m) throw InputError("degree sequence needs k_c > m");

  const double inv_exponent = -1.0 / (gamma - 1.0);
  const double upper = static_cast<double>(k_c) + 0.5;
  DegreeSequence seq;
  seq.degrees.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double k = 0.0;
    do {
      // 1 - u lies in (0, 1], so the draw is finite and >= m.
      const double x = static_cast<double>(m) * std::pow(1.0 - rng.uniform(), inv_exponent);
      k = std::floor(x + 0.5);
    } while (!(k < upper));
    seq.degrees.push_back(static_cast<std::size_t>(k));
  }

  if (n > 0 && seq.sum() % 2 != 0) {
    std::vector<std::size_t> below;
    for (std::size_t i = 0; i < n; ++i) {
      if (seq.degrees[i] < k_c) below.push_back(i);
    }
    if (!below.empty()) {
      ++seq.degrees[below[rng.index(below.size())]];
    } else {
      // Every entry sits at k_c > m, so stepping one down stays in range.
      --seq.degrees[rng.index(n)];
    }
  }
  return seq;
}

CmResult configuration_model(const DegreeSequence& seq, Rng& rng) {
  if (seq.sum() % 2 != 0) throw InputError("degree sequence sum must be even");
  const std::size_t n = seq.degrees.size();
  CmResult out{Graph(n), seq, 0, 0};

  std::vector<NodeId> stubs;
  stubs.reserve(seq.sum());
  for (NodeId u = 0; u < n; ++u) stubs.insert(stubs.end(), seq.degrees[u], u);

  // A uniform shuffle paired off consecutively is the same as repeatedly
  // joining two uniformly chosen free stubs.
  for (std::size_t i = stubs.size(); i > 1; --i) {
    std::swap(stubs[i - 1], stubs[rng.index(i)]);
  }
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    const NodeId u = stubs[i];
    const NodeId v = stubs[i + 1];
    if (u == v) {
      ++out.removed_self_loops;
    } else if (!out.graph.add_edge(u, v)) {
      ++out.removed_multi_edges;
    }
  }
  return out;
}

CmResult generate_cm(const GeneratorConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t k_c = cfg.hard_cutoff.value_or(std::max(cfg.n_nodes, cfg.stubs + 1));
  auto seq = sample_powerlaw_degree_sequence(cfg.n_nodes, cfg.stubs, cfg.gamma_target, k_c, rng);
  return configuration_model(seq, rng);
}

}  // namespace p2pnet
