// Command-line front end: generate, analyze, search, experiment, spec-check.
//
// Exit codes: 0 success, 2 bad spec or arguments, 3 generation failure,
// 4 I/O failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "p2pnet/errors.hpp"
#include "p2pnet/harness.hpp"

namespace fs = std::filesystem;
using namespace p2pnet;

namespace {

constexpr int kOk = 0;
constexpr int kSpecError = 2;
constexpr int kGenerationError = 3;
constexpr int kIoError = 4;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to `path`, or stdout when path is empty or "-".
void write_output(const std::string& path, bool overwrite, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  if (fs::exists(path) && !overwrite) throw IoError(path + " exists; pass --overwrite to replace it");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

struct GenerateArgs {
  std::string model = "PA";
  std::size_t n = 1000;
  std::size_t m = 1;
  std::size_t cutoff = 0;
  double gamma = 3.0;
  std::size_t tau_sub = 1;
  std::string substrate = "grn";
  std::size_t n_substrate = 0;
  double substrate_degree = 10.0;
  double radius = 0.0;
  std::size_t dimensions = 2;
  std::string acceptance = "max_degree";
  std::uint64_t seed = 1;
  std::string out;
  bool overwrite = false;
};

int run_generate(const GenerateArgs& a) {
  GeneratorConfig cfg;
  cfg.model = parse_model(a.model);
  cfg.n_nodes = a.n;
  cfg.stubs = a.m;
  if (a.cutoff > 0) cfg.hard_cutoff = a.cutoff;
  cfg.gamma_target = a.gamma;
  cfg.tau_sub = a.tau_sub;
  cfg.seed = a.seed;
  if (a.acceptance == "max_degree") {
    cfg.acceptance = AcceptanceBound::MaxDegree;
  } else if (a.acceptance == "total_degree") {
    cfg.acceptance = AcceptanceBound::TotalDegree;
  } else {
    throw InputError("--acceptance must be max_degree or total_degree");
  }
  if (cfg.model == Model::DAPA) {
    SubstrateConfig sub;
    if (a.substrate == "grn") {
      sub.kind = SubstrateKind::Grn;
    } else if (a.substrate == "mesh") {
      sub.kind = SubstrateKind::Mesh;
    } else {
      throw InputError("--substrate must be grn or mesh");
    }
    sub.n_substrate = a.n_substrate > 0 ? a.n_substrate : 2 * a.n;
    sub.dimensions = a.dimensions;
    sub.radius = a.radius > 0.0 ? a.radius : grn_radius_for_mean_degree(sub.n_substrate, a.substrate_degree, a.dimensions);
    sub.seed = derive_seed(a.seed, {0x5b});
    cfg.substrate = sub;
  }
  const Topology topo = generate(cfg);
  std::ostringstream text;
  write_edge_list(topo.graph, text);
  write_output(a.out, a.overwrite, text.str());
  if (cfg.model == Model::CM) {
    std::cerr << "removed self-loops: " << topo.removed_self_loops
              << ", removed multi-edges: " << topo.removed_multi_edges << "\n";
  }
  return kOk;
}

struct AnalyzeArgs {
  std::string input;
  std::size_t m = 1;
  std::size_t cutoff = 0;
  std::size_t bins_per_decade = 10;
  std::size_t fit_lo = 0;
  std::size_t fit_hi = 0;
  std::string out;
  bool overwrite = false;
};

int run_analyze(const AnalyzeArgs& a) {
  const Graph g = load_edge_list(a.input);
  const DegreeHistogram h = degree_histogram(g);
  std::optional<std::size_t> cutoff;
  if (a.cutoff > 0) cutoff = a.cutoff;
  auto [lo, hi] = default_fit_range(h, a.m, cutoff);
  if (a.fit_lo > 0) lo = a.fit_lo;
  if (a.fit_hi > 0) hi = a.fit_hi;

  nlohmann::ordered_json report;
  report["nodes"] = g.node_count();
  report["edges"] = g.edge_count();
  report["k_max"] = h.max_degree();
  report["giant_component"] = giant_component(g).size;
  for (auto method : {FitMethod::LogBinnedLs, FitMethod::TruncatedMle}) {
    const std::string key = method == FitMethod::LogBinnedLs ? "fit" : "fit_mle";
    try {
      const auto f = fit_powerlaw_exponent(h, lo, hi, method, a.bins_per_decade);
      report[key] = {{"gamma_hat", f.gamma_hat}, {"stderr", f.std_error}, {"k_lo", f.k_lo},
                     {"k_hi", f.k_hi},           {"r_squared", f.r_squared}, {"method", to_string(f.method)}};
      if (cutoff && method == FitMethod::LogBinnedLs) {
        const auto s = cutoff_spike_fraction(h, *cutoff, f);
        report["spike"] = {{"observed", s.observed}, {"extrapolated", s.extrapolated}, {"excess_ratio", s.excess_ratio}};
      }
    } catch (const FitError& e) {
      report[key] = nullptr;
      report[key + "_error"] = e.what();
    }
  }
  try {
    const auto shape = classify_distribution(h, lo, hi, a.bins_per_decade);
    report["shape"] = {{"class", to_string(shape.shape)},
                       {"r2_power", shape.r2_power},
                       {"r2_exponential", shape.r2_exponential}};
  } catch (const std::exception& e) {
    report["shape"] = nullptr;
  }

  if (a.out.empty()) {
    std::cout << report.dump(2) << "\n";
    return kOk;
  }
  prepare_output_dir(a.out, a.overwrite);
  std::ostringstream hist;
  write_histogram_csv(h, hist);
  std::ostringstream bins;
  write_log_bins_csv(log_bin_histogram(h, a.bins_per_decade), bins);
  const fs::path dir(a.out);
  write_output((dir / "histogram.csv").string(), true, hist.str());
  write_output((dir / "logbin.csv").string(), true, bins.str());
  write_output((dir / "report.json").string(), true, report.dump(2) + "\n");
  return kOk;
}

struct SearchArgs {
  std::string input;
  std::string algorithm = "FL";
  std::uint32_t ttl_min = 1;
  std::uint32_t ttl_max = 10;
  std::size_t sources = 100;
  std::uint32_t k_min = 0;
  std::uint64_t seed = 1;
  std::string out;
  bool overwrite = false;
};

int run_search_cmd(const SearchArgs& a) {
  if (a.ttl_min < 1 || a.ttl_max < a.ttl_min) throw InputError("need 1 <= --ttl-min <= --ttl-max");
  const Graph g = load_edge_list(a.input);
  CurveRequest req;
  req.kind = parse_curve_kind(a.algorithm);
  for (auto t = a.ttl_min; t <= a.ttl_max; ++t) req.ttls.push_back(t);
  req.n_sources = a.sources;
  req.seed = a.seed;
  req.k_min = a.k_min;
  if (req.k_min == 0) {
    // Smallest nonzero degree stands in for the generator's m.
    std::size_t k = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      const auto d = g.degree(u);
      if (d > 0 && (k == 0 || d < k)) k = d;
    }
    req.k_min = static_cast<std::uint32_t>(std::max<std::size_t>(k, 1));
  }
  std::ostringstream csv;
  write_curve_csv(measure_search_curve(g, req), csv);
  write_output(a.out, a.overwrite, csv.str());
  return kOk;
}

struct ExperimentArgs {
  std::string spec_path;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  std::string out;
  bool overwrite = false;
  bool per_realization = false;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentSpec spec = parse_spec(read_text(a.spec_path));
  if (a.seed) spec.master_seed = *a.seed;
  const std::string dir = !a.out.empty() ? a.out : spec.output_dir.value_or("");
  if (dir.empty()) throw SpecError("no output directory: set output_dir in the spec or pass --out");

  // Refuse a bad destination before spending time on the ensemble.
  prepare_output_dir(dir, a.overwrite);
  RunOptions run;
  run.workers = std::max<std::size_t>(a.workers, 1);
  const EnsembleResult result = run_experiment(spec, run);
  EmitOptions emit;
  emit.overwrite = true;
  emit.per_realization = a.per_realization;
  const auto files = emit_outputs(result, dir, emit);

  for (const auto& r : result.points) {
    std::cerr << r.point.label << ": ";
    if (r.failure) {
      std::cerr << "FAILED " << *r.failure << "\n";
    } else if (r.fit) {
      std::cerr << "gamma_hat=" << r.fit->gamma_hat << " +- " << r.fit->std_error << ", mean k_max=" << r.mean_k_max
                << "\n";
    } else {
      std::cerr << "no fit (" << r.fit_error.value_or("?") << ")\n";
    }
  }
  std::cerr << "wrote " << files.size() << " files to " << dir << "\n";
  return result.any_failure() ? kGenerationError : kOk;
}

int run_spec_check(const std::string& path) {
  const ExperimentSpec spec = parse_spec(read_text(path));
  const auto points = expand_sweep(spec);
  std::cout << "ok: " << points.size() << " sweep point(s), " << spec.realizations << " realization(s) each\n";
  for (const auto& p : points) {
    p.config.validate();
    std::cout << "  " << p.label << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peer-to-peer overlay topology and search simulator"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Build one topology and write its edge list");
  generate_cmd->add_option("--model", gen.model, "PA, CM, HAPA or DAPA")->required();
  generate_cmd->add_option("-n,--nodes", gen.n, "Node count (overlay size for DAPA)")->required();
  generate_cmd->add_option("-m,--stubs", gen.m, "Links per joining node / minimum degree");
  generate_cmd->add_option("--cutoff", gen.cutoff, "Hard degree cutoff (0 = none)");
  generate_cmd->add_option("--gamma", gen.gamma, "Target exponent (CM)");
  generate_cmd->add_option("--tau-sub", gen.tau_sub, "Substrate hop horizon (DAPA)");
  generate_cmd->add_option("--substrate", gen.substrate, "grn or mesh (DAPA)");
  generate_cmd->add_option("--n-substrate", gen.n_substrate, "Substrate size (DAPA, default 2N)");
  generate_cmd->add_option("--substrate-degree", gen.substrate_degree, "Target GRN mean degree");
  generate_cmd->add_option("--radius", gen.radius, "GRN link radius (overrides --substrate-degree)");
  generate_cmd->add_option("--dimensions", gen.dimensions, "GRN dimensions");
  generate_cmd->add_option("--acceptance", gen.acceptance, "max_degree or total_degree");
  generate_cmd->add_option("--seed", gen.seed, "Random seed");
  generate_cmd->add_option("--out", gen.out, "Edge-list file (default stdout)");
  generate_cmd->add_flag("--overwrite", gen.overwrite, "Replace an existing file");

  AnalyzeArgs an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Degree histogram and exponent fit of an edge list");
  analyze_cmd->add_option("input", an.input, "Edge-list file")->required();
  analyze_cmd->add_option("-m,--stubs", an.m, "Lower end of the default fit range");
  analyze_cmd->add_option("--cutoff", an.cutoff, "Hard cutoff to exclude from the fit (0 = none)");
  analyze_cmd->add_option("--bins-per-decade", an.bins_per_decade);
  analyze_cmd->add_option("--fit-lo", an.fit_lo, "Override the fit range lower end");
  analyze_cmd->add_option("--fit-hi", an.fit_hi, "Override the fit range upper end");
  analyze_cmd->add_option("--out", an.out, "Directory for histogram.csv, logbin.csv, report.json");
  analyze_cmd->add_flag("--overwrite", an.overwrite);

  SearchArgs se;
  auto* search_cmd = app.add_subcommand("search", "Search curve over an edge list");
  search_cmd->add_option("input", se.input, "Edge-list file")->required();
  search_cmd->add_option("--algorithm", se.algorithm, "FL, NF, RW or RW_NF (walk with the NF message budget)");
  search_cmd->add_option("--ttl-min", se.ttl_min);
  search_cmd->add_option("--ttl-max", se.ttl_max);
  search_cmd->add_option("--sources", se.sources, "Random sources per tau");
  search_cmd->add_option("--k-min", se.k_min, "NF fan-out (default: smallest nonzero degree)");
  search_cmd->add_option("--seed", se.seed);
  search_cmd->add_option("--out", se.out, "Curve CSV (default stdout)");
  search_cmd->add_flag("--overwrite", se.overwrite);

  ExperimentArgs ex;
  auto* experiment_cmd = app.add_subcommand("experiment", "Run a full ensemble from a spec file");
  experiment_cmd->add_option("spec", ex.spec_path, "Spec file")->required();
  experiment_cmd->add_option("--seed", ex.seed, "Override master_seed");
  experiment_cmd->add_option("--workers", ex.workers, "Concurrent realizations");
  experiment_cmd->add_option("--out", ex.out, "Output directory (overrides output_dir)");
  experiment_cmd->add_flag("--overwrite", ex.overwrite, "Replace a previous run's outputs");
  experiment_cmd->add_flag("--per-realization", ex.per_realization, "Also write realizations.csv per sweep point");

  std::string check_path;
  auto* check_cmd = app.add_subcommand("spec-check", "Validate a spec file without running it");
  check_cmd->add_option("spec", check_path, "Spec file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kSpecError;
  }

  try {
    if (*generate_cmd) return run_generate(gen);
    if (*analyze_cmd) return run_analyze(an);
    if (*search_cmd) return run_search_cmd(se);
    if (*experiment_cmd) return run_experiment_cmd(ex);
    if (*check_cmd) return run_spec_check(check_path);
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kSpecError;
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kSpecError;
  } catch (const GenerationError& e) {
    std::cerr << "generation failed: " << e.what() << "\n";
    return kGenerationError;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGenerationError;
  }
  return kSpecError;
}
