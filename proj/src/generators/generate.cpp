#include "p2pnet/generators.hpp"

namespace p2pnet {

Topology generate(const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  Topology out;
  switch (cfg.model) {
    case Model::PA:
      out.graph = generate_pa(cfg, rng);
      break;
    case Model::HAPA:
      out.graph = generate_hapa(cfg, rng);
      break;
    case Model::CM: {
      auto cm = generate_cm(cfg, rng);
      out.graph = std::move(cm.graph);
      out.removed_self_loops = cm.removed_self_loops;
      out.removed_multi_edges = cm.removed_multi_edges;
      break;
    }
    case Model::DAPA: {
      auto build = generate_dapa(cfg, rng);
      out.graph = std::move(build.overlay.overlay);
      out.substrate_node_of = std::move(build.overlay.substrate_node_of);
      out.substrate = std::move(build.substrate);
      break;
    }
  }
  return out;
}

}  // namespace p2pnet
