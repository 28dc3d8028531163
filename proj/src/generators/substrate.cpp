// Substrate networks for DAPA: geometric random network and 2-D mesh.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "p2pnet/errors.hpp"
#include "p2pnet/generators.hpp"

namespace p2pnet {

double grn_radius_for_mean_degree(std::size_t n_substrate, double mean_degree, std::size_t dimensions) {
  if (n_substrate == 0 || !(mean_degree > 0.0) || dimensions < 1) {
    throw InputError("need N_S > 0, d >= 1 and a positive mean degree");
  }
  const double d = static_cast<double>(dimensions);
  const double unit_ball = std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
  return std::pow(mean_degree / (static_cast<double>(n_substrate) * unit_ball), 1.0 / d);
}

SpatialGraph generate_grn(const SubstrateConfig& cfg, Rng& rng) {
  const std::size_t n = cfg.n_substrate;
  const std::size_t d = cfg.dimensions;
  const double r = cfg.radius;
  if (d < 1) throw InputError("GRN needs d >= 1");
  if (!(r > 0.0)) throw InputError("GRN needs R > 0");

  SpatialGraph out{Graph(n), d, std::vector<double>(n * d)};
  for (double& c : out.coords) c = rng.uniform();

  // Bucket nodes on a grid of cell side >= R, so every partner of a node
  // lies in its own or an adjacent cell. Cells never outnumber ~4 per node;
  // coarser cells only cost extra distance checks.
  const double finest = std::floor(1.0 / r);
  const double coarsest = std::floor(std::pow(4.0 * static_cast<double>(std::max<std::size_t>(n, 1)), 1.0 / static_cast<double>(d)));
  const auto per_dim = static_cast<std::size_t>(std::max(1.0, std::min(finest, coarsest)));
  std::size_t n_cells = 1;
  for (std::size_t i = 0; i < d; ++i) n_cells *= per_dim;
  auto cell_coord = [&](double x) {
    return std::min(per_dim - 1, static_cast<std::size_t>(x * static_cast<double>(per_dim)));
  };

  std::vector<std::size_t> cell_start(n_cells + 1, 0);
  std::vector<std::size_t> cell_of(n);
  for (NodeId u = 0; u < n; ++u) {
    std::size_t c = 0;
    for (std::size_t k = 0; k < d; ++k) c = c * per_dim + cell_coord(out.coords[u * d + k]);
    cell_of[u] = c;
    ++cell_start[c + 1];
  }
  for (std::size_t c = 0; c < n_cells; ++c) cell_start[c + 1] += cell_start[c];
  std::vector<NodeId> bucket(n);
  {
    auto fill = cell_start;
    for (NodeId u = 0; u < n; ++u) bucket[fill[cell_of[u]]++] = u;
  }

  const double r2 = r * r;
  std::vector<std::size_t> lo(d), hi(d), cur(d);
  for (NodeId u = 0; u < n; ++u) {
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t h = cell_coord(out.coords[u * d + k]);
      lo[k] = h == 0 ? 0 : h - 1;
      hi[k] = std::min(per_dim - 1, h + 1);
    }
    // Odometer over the (up to) 3^d neighboring cells.
    cur = lo;
    while (true) {
      std::size_t c = 0;
      for (std::size_t k = 0; k < d; ++k) c = c * per_dim + cur[k];
      for (std::size_t b = cell_start[c]; b < cell_start[c + 1]; ++b) {
        const NodeId v = bucket[b];
        if (v <= u) continue;
        double dist2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double delta = out.coords[u * d + k] - out.coords[v * d + k];
          dist2 += delta * delta;
        }
        if (dist2 < r2) out.graph.add_edge(u, v);
      }
      std::size_t k = d;
      while (k > 0 && cur[k - 1] == hi[k - 1]) {
        cur[k - 1] = lo[k - 1];
        --k;
      }
      if (k == 0) break;
      ++cur[k - 1];
    }
  }
  return out;
}

SpatialGraph generate_mesh(const SubstrateConfig& cfg) {
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(cfg.n_substrate))));
  if (side * side != cfg.n_substrate) throw InputError("mesh substrate needs a perfect-square N_S");
  SpatialGraph out{Graph(cfg.n_substrate), 2, std::vector<double>(cfg.n_substrate * 2)};
  for (std::size_t row = 0; row < side; ++row) {
    for (std::size_t col = 0; col < side; ++col) {
      const auto u = static_cast<NodeId>(row * side + col);
      out.coords[2 * u] = static_cast<double>(col) / static_cast<double>(side);
      out.coords[2 * u + 1] = static_cast<double>(row) / static_cast<double>(side);
      if (col + 1 < side) out.graph.add_edge(u, u + 1);
      if (row + 1 < side) out.graph.add_edge(u, static_cast<NodeId>(u + side));
    }
  }
  return out;
}

SpatialGraph generate_substrate(const SubstrateConfig& cfg) {
  if (cfg.kind == SubstrateKind::Mesh) return generate_mesh(cfg);
  Rng rng(cfg.seed);
  return generate_grn(cfg, rng);
}

}  // namespace p2pnet
