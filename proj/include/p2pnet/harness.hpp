#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "p2pnet/analysis.hpp"
#include "p2pnet/generators.hpp"
#include "p2pnet/search.hpp"

namespace p2pnet {

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A full ensemble description. Sweep lists are expanded as a cartesian
/// product in the order n_nodes, m, cutoffs, gamma_target, tau_sub.
struct ExperimentSpec {
  std::string text;  // the document as given, echoed into the manifest

  Model model = Model::PA;
  std::vector<std::size_t> n_nodes;
  std::vector<std::size_t> stubs;
  std::vector<std::optional<std::size_t>> cutoffs{std::nullopt};
  std::vector<double> gamma_targets{3.0};
  std::vector<std::size_t> tau_subs{1};

  SubstrateKind substrate_kind = SubstrateKind::Grn;
  std::optional<std::size_t> n_substrate;  // default 2 * N_O
  double substrate_degree = 10.0;          // sets R when radius is absent
  std::optional<double> radius;
  std::size_t dimensions = 2;
  AcceptanceBound acceptance = AcceptanceBound::MaxDegree;

  std::size_t realizations = 10;
  std::vector<CurveKind> searches;
  std::uint32_t ttl_min = 1;
  std::uint32_t ttl_max = 10;
  std::size_t n_sources = 100;
  std::size_t bins_per_decade = 10;
  std::uint64_t master_seed = 1;
  std::optional<std::string> output_dir;

  std::vector<std::uint32_t> ttls() const;
};

/// Parses whitespace- or newline-separated key=value pairs ('#' starts a
/// comment). Lists are comma-separated; "none" in cutoffs means no cutoff.
/// Throws SpecError naming the offending key.
ExperimentSpec parse_spec(const std::string& text);

/// One expanded sweep point.
struct SweepPoint {
  std::size_t index = 0;
  GeneratorConfig config;  // seed left at 0; realizations derive their own
  std::string label;       // e.g. "pa_n10000_m2_kc10"
};

std::vector<SweepPoint> expand_sweep(const ExperimentSpec& spec);

/// Child seed for one realization; pure in its arguments.
std::uint64_t realization_seed(std::uint64_t master_seed, std::size_t sweep_index, std::size_t realization);

struct RealizationRecord {
  std::size_t realization = 0;
  std::uint64_t seed = 0;
  std::size_t k_max = 0;
  double giant_fraction = 0.0;
  std::size_t removed_self_loops = 0;
  std::size_t removed_multi_edges = 0;
  std::size_t min_degree = 0;
};

struct SweepResult {
  SweepPoint point;
  std::size_t realizations_requested = 0;
  std::optional<std::string> failure;

  std::vector<RealizationRecord> records;
  DegreeHistogram pooled;
  std::optional<ExponentFit> fit;
  std::optional<ExponentFit> fit_mle;
  std::optional<std::string> fit_error;
  std::optional<SpikeReport> spike;
  double mean_k_max = 0.0;
  double stderr_k_max = 0.0;
  double mean_giant_fraction = 0.0;
  double mean_removed_self_loops = 0.0;
  double mean_removed_multi_edges = 0.0;

  std::vector<CurveKind> curve_kinds;
  std::vector<CurveSamples> curve_samples;  // pooled over realizations

  std::vector<CurvePoint> curve(CurveKind kind) const;
};

struct EnsembleResult {
  ExperimentSpec spec;
  std::vector<SweepResult> points;

  bool any_failure() const;
};

struct RunOptions {
  std::size_t workers = 1;
};

/// Generates, analyses and searches every (sweep point, realization). A
/// failing realization marks its whole sweep point failed; other points
/// still complete.
EnsembleResult run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});

/// Creates `dir` if needed and checks it can be written. Refuses a
/// non-empty directory unless `overwrite`. Throws IoError.
void prepare_output_dir(const std::filesystem::path& dir, bool overwrite);

struct EmitOptions {
  bool overwrite = false;
  bool per_realization = false;
};

/// Writes one subdirectory per successful sweep point plus manifest.json;
/// returns the written paths relative to `dir`.
std::vector<std::string> emit_outputs(const EnsembleResult& result, const std::filesystem::path& dir,
                                      const EmitOptions& opts = {});

}  // namespace p2pnet
