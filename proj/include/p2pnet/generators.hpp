#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "p2pnet/graph.hpp"
#include "p2pnet/rng.hpp"

namespace p2pnet {

enum class Model { PA, CM, HAPA, DAPA };

std::string to_string(Model m);
Model parse_model(const std::string& name);

enum class SubstrateKind { Grn, Mesh };

struct SubstrateConfig {
  SubstrateKind kind = SubstrateKind::Grn;
  std::size_t n_substrate = 20000;
  /// Link radius for GRN; ignored for the mesh.
  double radius = 0.01262;
  std::size_t dimensions = 2;
  std::uint64_t seed = 0;
};

/// Radius giving an expected GRN mean degree of `mean_degree`, from
/// N·V_d·R^d = mean_degree with V_d the unit-ball volume (N·pi·R^2 in 2-D).
/// Boundary losses are ignored.
double grn_radius_for_mean_degree(std::size_t n_substrate, double mean_degree, std::size_t dimensions = 2);

/// How the degree-proportional rejection loop normalizes its acceptance
/// probability. Both give the same conditional law (probability
/// proportional to degree among eligible candidates); MaxDegree only
/// wastes fewer proposals.
enum class AcceptanceBound {
  TotalDegree,  // accept with k / k_total, as in the classic join loop
  MaxDegree,    // accept with k / (largest degree a candidate can have)
};

struct GeneratorConfig {
  Model model = Model::PA;
  /// Final node count; the overlay size N_O for DAPA.
  std::size_t n_nodes = 0;
  std::size_t stubs = 1;
  std::optional<std::size_t> hard_cutoff;
  /// Degree exponent of the prescribed sequence (CM only).
  double gamma_target = 3.0;
  /// Substrate hop horizon (DAPA only).
  std::size_t tau_sub = 1;
  std::optional<SubstrateConfig> substrate;
  std::uint64_t seed = 0;
  AcceptanceBound acceptance = AcceptanceBound::MaxDegree;

  /// Throws InputError on a violated constraint.
  void validate() const;
};

/// Draws one node among `candidates` with probability proportional to its
/// degree, skipping nodes adjacent to `joiner` or at the cutoff.
///
/// Proposals are uniform over `candidates` and accepted with probability
/// degree / acceptance_norm (acceptance_norm = 0 means g.total_degree()).
/// acceptance_norm must be at least the largest eligible degree. After 50·N
/// consecutive rejections the eligible set is scanned and, if non-empty, an
/// exact roulette draw is made instead. Returns nullopt when no candidate
/// is eligible.
std::optional<NodeId> preferential_pick(const Graph& g, std::span<const NodeId> candidates, NodeId joiner,
                                        std::optional<std::size_t> cutoff, Rng& rng,
                                        std::uint64_t acceptance_norm = 0);

Graph generate_pa(const GeneratorConfig& cfg, Rng& rng);

struct DegreeSequence {
  std::vector<std::size_t> degrees;
  std::uint64_t sum() const;
};

/// n i.i.d. draws of a power law with exponent gamma on [m, k_c], made by
/// rounding the continuous density (gamma-1) m^(gamma-1) / k^gamma and
/// redrawing values above k_c. The sum is then made even.
DegreeSequence sample_powerlaw_degree_sequence(std::size_t n, std::size_t m, double gamma, std::size_t k_c,
                                               Rng& rng);

struct CmResult {
  Graph graph;
  DegreeSequence sequence;
  std::size_t removed_self_loops = 0;
  std::size_t removed_multi_edges = 0;
};

/// Uniform stub pairing over `seq`, then self-loops and parallel edges are
/// dropped.
CmResult configuration_model(const DegreeSequence& seq, Rng& rng);

/// Samples the sequence (k_c defaults to N) and pairs it.
CmResult generate_cm(const GeneratorConfig& cfg, Rng& rng);

Graph generate_hapa(const GeneratorConfig& cfg, Rng& rng);

struct SpatialGraph {
  Graph graph;
  std::size_t dimensions = 2;
  /// Row-major, `dimensions` values per node.
  std::vector<double> coords;

  std::span<const double> position(NodeId u) const {
    return std::span<const double>(coords).subspan(u * dimensions, dimensions);
  }
};

/// Geometric random network in the unit box (open boundary).
SpatialGraph generate_grn(const SubstrateConfig& cfg, Rng& rng);

/// side x side four-neighbor lattice; n_substrate must be a perfect square.
SpatialGraph generate_mesh(const SubstrateConfig& cfg);

/// GRN or mesh per cfg.kind; the RNG is seeded from cfg.seed.
SpatialGraph generate_substrate(const SubstrateConfig& cfg);

struct DapaResult {
  Graph overlay;
  /// substrate_node_of[overlay id] = substrate id.
  std::vector<NodeId> substrate_node_of;
};

/// Grows an overlay of cfg.n_nodes peers on `substrate`; see generate_dapa.
DapaResult build_dapa_overlay(const GeneratorConfig& cfg, const Graph& substrate, Rng& rng);

struct DapaBuild {
  SpatialGraph substrate;
  DapaResult overlay;
};

/// Builds the substrate from cfg.substrate, then the overlay. Joiners see
/// only the peers within cfg.tau_sub substrate hops; a joiner with an empty
/// horizon is skipped and may be drawn again later.
DapaBuild generate_dapa(const GeneratorConfig& cfg, Rng& rng);

/// Result of any of the four overlay models, for callers that do not care
/// which one ran.
struct Topology {
  Graph graph;
  std::size_t removed_self_loops = 0;
  std::size_t removed_multi_edges = 0;
  /// DAPA only.
  std::vector<NodeId> substrate_node_of;
  std::optional<SpatialGraph> substrate;
};

/// Dispatches on cfg.model with an RNG seeded from cfg.seed.
Topology generate(const GeneratorConfig& cfg);

}  // namespace p2pnet
