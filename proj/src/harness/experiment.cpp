#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "p2pnet/errors.hpp"
#include "p2pnet/harness.hpp"

namespace p2pnet {

namespace {

struct TaskResult {
  std::optional<std::string> error;
  RealizationRecord record;
  DegreeHistogram histogram;
  std::vector<CurveSamples> curves;
};

TaskResult run_realization(const ExperimentSpec& spec, const SweepPoint& point, std::size_t realization) {
  TaskResult out;
  try {
    GeneratorConfig cfg = point.config;
    cfg.seed = realization_seed(spec.master_seed, point.index, realization);
    if (cfg.substrate) cfg.substrate->seed = derive_seed(cfg.seed, {0x5b});
    const Topology topo = generate(cfg);
    const Graph& g = topo.graph;

    out.record.realization = realization;
    out.record.seed = cfg.seed;
    out.histogram = degree_histogram(g);
    out.record.k_max = out.histogram.max_degree();
    out.record.min_degree = out.histogram.counts.empty() ? 0 : out.histogram.counts.begin()->first;
    out.record.giant_fraction =
        g.node_count() == 0 ? 0.0 : static_cast<double>(giant_component(g).size) / static_cast<double>(g.node_count());
    out.record.removed_self_loops = topo.removed_self_loops;
    out.record.removed_multi_edges = topo.removed_multi_edges;

    // One search seed for every curve kind: all kinds start from the same
    // sources, and the budgeted walk replays exactly the NF run it is
    // compared against.
    for (std::size_t i = 0; i < spec.searches.size(); ++i) {
      CurveRequest req;
      req.kind = spec.searches[i];
      req.ttls = spec.ttls();
      req.n_sources = spec.n_sources;
      req.k_min = static_cast<std::uint32_t>(cfg.stubs);
      req.seed = derive_seed(cfg.seed, {0x5e});
      out.curves.push_back(sample_search_curve(g, req));
    }
  } catch (const std::exception& e) {
    out.error = "realization " + std::to_string(realization) + ": " + e.what();
  }
  return out;
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double stderr_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double n = static_cast<double>(xs.size());
  return std::sqrt(ss / (n - 1.0) / n);
}

SweepResult aggregate(const ExperimentSpec& spec, const SweepPoint& point, std::vector<TaskResult>& tasks) {
  SweepResult r;
  r.point = point;
  r.realizations_requested = spec.realizations;
  r.curve_kinds = spec.searches;
  for (const auto& t : tasks) {
    if (t.error) {
      r.failure = *t.error;
      return r;
    }
  }

  std::vector<double> kmax;
  std::vector<double> giant;
  std::vector<double> loops;
  std::vector<double> multi;
  r.curve_samples.resize(spec.searches.size());
  for (auto& t : tasks) {
    r.records.push_back(t.record);
    r.pooled.merge(t.histogram);
    kmax.push_back(static_cast<double>(t.record.k_max));
    giant.push_back(t.record.giant_fraction);
    loops.push_back(static_cast<double>(t.record.removed_self_loops));
    multi.push_back(static_cast<double>(t.record.removed_multi_edges));
    for (std::size_t i = 0; i < t.curves.size(); ++i) r.curve_samples[i].append(t.curves[i]);
  }
  r.mean_k_max = mean_of(kmax);
  r.stderr_k_max = stderr_of(kmax);
  r.mean_giant_fraction = mean_of(giant);
  r.mean_removed_self_loops = mean_of(loops);
  r.mean_removed_multi_edges = mean_of(multi);

  const auto [lo, hi] = default_fit_range(r.pooled, point.config.stubs, point.config.hard_cutoff);
  try {
    r.fit = fit_powerlaw_exponent(r.pooled, lo, hi, FitMethod::LogBinnedLs, spec.bins_per_decade);
    r.fit_mle = fit_powerlaw_exponent(r.pooled, lo, hi, FitMethod::TruncatedMle, spec.bins_per_decade);
    if (point.config.hard_cutoff) r.spike = cutoff_spike_fraction(r.pooled, *point.config.hard_cutoff, *r.fit);
  } catch (const FitError& e) {
    r.fit.reset();
    r.fit_mle.reset();
    r.fit_error = e.what();
  }
  return r;
}

}  // namespace

std::vector<CurvePoint> SweepResult::curve(CurveKind kind) const {
  for (std::size_t i = 0; i < curve_kinds.size(); ++i) {
    if (curve_kinds[i] == kind) return summarize(curve_samples[i]);
  }
  throw InputError("no " + to_string(kind) + " curve in this sweep point");
}

bool EnsembleResult::any_failure() const {
  return std::any_of(points.begin(), points.end(), [](const SweepResult& p) { return p.failure.has_value(); });
}

EnsembleResult run_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
  const auto points = expand_sweep(spec);
  const std::size_t per_point = spec.realizations;
  const std::size_t total = points.size() * per_point;
  std::vector<TaskResult> results(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < total; t = next++) {
      results[t] = run_realization(spec, points[t / per_point], t % per_point);
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(opts.workers, 1, std::max<std::size_t>(total, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  EnsembleResult out;
  out.spec = spec;
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<TaskResult> slice(std::make_move_iterator(results.begin() + static_cast<long>(p * per_point)),
                                  std::make_move_iterator(results.begin() + static_cast<long>((p + 1) * per_point)));
    out.points.push_back(aggregate(spec, points[p], slice));
  }
  return out;
}

}  // namespace p2pnet
