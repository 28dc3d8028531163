#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "p2pnet/graph.hpp"

namespace p2pnet {

enum class Algorithm { FL, NF, RW };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

struct SearchConfig {
  Algorithm algorithm = Algorithm::FL;
  NodeId source = 0;
  std::uint32_t ttl = 1;
  /// Forwarding fan-out for NF; the generator's m.
  std::uint32_t k_min = 0;
  std::uint64_t rng_seed = 0;
  std::optional<NodeId> target;
};

struct SearchOutcome {
  /// Distinct nodes reached, source excluded.
  std::size_t hits = 0;
  /// Forwarding events, duplicates included; steps taken for RW.
  std::size_t messages = 0;
  std::uint32_t ttl_used = 0;
  NodeId source = 0;
  std::optional<std::uint32_t> delivery_hops;
};

/// Flooding: every node forwards its first copy to all neighbors but the
/// sender while the hop count is below ttl. Later copies are counted and
/// dropped.
SearchOutcome flood_search(const Graph& g, const SearchConfig& cfg);

/// Normalized flooding: like flood_search but a node with more than k_min
/// onward options forwards to k_min of them chosen uniformly. The source
/// sends to min(degree, k_min) neighbors.
SearchOutcome normalized_flood_search(const Graph& g, const SearchConfig& cfg);

/// Single non-backtracking walker, ttl steps (fewer if the target is
/// found). At a dead end it steps back. Throws DegenerateInputError for an
/// isolated source.
SearchOutcome random_walk_search(const Graph& g, const SearchConfig& cfg);

/// Dispatch on cfg.algorithm.
SearchOutcome run_search(const Graph& g, const SearchConfig& cfg);

/// RW step budget that matches the messages an NF run spent.
inline std::size_t normalized_rw_budget(const SearchOutcome& nf_outcome) { return nf_outcome.messages; }

/// Which search a curve measures. BudgetedRW runs NF at each tau first and
/// gives the walker that many steps.
enum class CurveKind { FL, NF, RW, BudgetedRW };

std::string to_string(CurveKind k);
CurveKind parse_curve_kind(const std::string& name);

struct CurveRequest {
  CurveKind kind = CurveKind::FL;
  std::vector<std::uint32_t> ttls;
  std::size_t n_sources = 100;
  std::uint32_t k_min = 1;
  std::uint64_t seed = 0;
};

/// Raw per-source outcomes, outcomes[t][s] for ttls[t] and source s.
struct CurveSamples {
  std::vector<std::uint32_t> ttls;
  std::vector<std::vector<SearchOutcome>> outcomes;

  /// Appends another sample set over the same ttls.
  void append(const CurveSamples& other);
};

struct CurvePoint {
  std::uint32_t tau = 0;
  std::size_t samples = 0;
  double mean_hits = 0.0;
  double stderr_hits = 0.0;
  double mean_messages = 0.0;
  double stderr_messages = 0.0;
};

/// Sources are drawn uniformly (with replacement) once and reused for every
/// tau; each source's random choices depend only on (seed, source index),
/// so a larger tau extends the smaller-tau run. Isolated sources score 0.
CurveSamples sample_search_curve(const Graph& g, const CurveRequest& req);

std::vector<CurvePoint> summarize(const CurveSamples& samples);

std::vector<CurvePoint> measure_search_curve(const Graph& g, const CurveRequest& req);

/// Header "tau,mean_hits,stderr_hits,mean_messages,stderr_messages".
void write_curve_csv(const std::vector<CurvePoint>& curve, std::ostream& out);

}  // namespace p2pnet
