// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "p2pnet/harness.hpp"
#include "support.hpp"

using namespace p2pnet;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Runs f(0..n-1) on the worker pool; results stay in index order.
template <typename T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& f) {
  std::vector<T> out(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) out[i] = f(i);
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < std::min(workers(), n); ++w) pool.emplace_back(work);
  work();
  return out;
}

EnsembleResult run(const std::string& spec_text) {
  RunOptions opts;
  opts.workers = workers();
  return run_experiment(parse_spec(spec_text), opts);
}

const SweepResult& point(const EnsembleResult& r, const std::string& label) {
  for (const auto& p : r.points) {
    if (p.point.label == label) {
      if (p.failure) throw std::runtime_error(label + " failed: " + *p.failure);
      return p;
    }
  }
  throw std::runtime_error("no sweep point " + label);
}

std::size_t curve_index(const SweepResult& r, CurveKind kind) {
  for (std::size_t i = 0; i < r.curve_kinds.size(); ++i) {
    if (r.curve_kinds[i] == kind) return i;
  }
  throw std::runtime_error("missing curve " + to_string(kind));
}

std::vector<Graph> realizations(const GeneratorConfig& base, std::size_t count, std::uint64_t master) {
  return parallel_map<Graph>(count, [&](std::size_t r) {
    GeneratorConfig cfg = base;
    cfg.seed = realization_seed(master, 0, r);
    if (cfg.substrate) cfg.substrate->seed = derive_seed(cfg.seed, {0x5b});
    return generate(cfg).graph;
  });
}

bool in(double x, double lo, double hi) { return x >= lo && x <= hi; }

// PA exponent at N=10^5, plus the desk-scale run with the literal
// total-degree acceptance rule.
Verdict ac1() {
  const auto big = run("model=PA n_nodes=100000 m=1 realizations=10 master_seed=101");
  const auto& fit = *point(big, "pa_n100000_m1_kcnone").fit;
  const auto desk = run("model=PA n_nodes=10000 m=1 realizations=10 acceptance=total_degree master_seed=102");
  const auto& dfit = *point(desk, "pa_n10000_m1_kcnone").fit;
  Verdict v;
  v.pass = in(fit.gamma_hat, 2.7, 3.0) && in(dfit.gamma_hat, 2.5, 3.1);
  v.detail = "N=1e5 gamma=" + fmt("%.3f", fit.gamma_hat) + " (need [2.7,3.0], fit k in [" + std::to_string(fit.k_lo) +
             "," + std::to_string(fit.k_hi) + "]); N=1e4 literal k/k_total gamma=" + fmt("%.3f", dfit.gamma_hat) +
             " (need [2.5,3.1])";
  return v;
}

Verdict ac2() {
  const auto r = run("model=PA n_nodes=1000,10000,100000 m=1 realizations=10 master_seed=201");
  std::vector<double> x;
  std::vector<double> y;
  std::string detail;
  for (std::size_t n : {1000, 10000, 100000}) {
    const auto& p = point(r, "pa_n" + std::to_string(n) + "_m1_kcnone");
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(std::log(p.mean_k_max));
    detail += "N=" + std::to_string(n) + " <k_max>=" + fmt("%.1f", p.mean_k_max) + "; ";
  }
  const auto line = least_squares(x, y);
  Verdict v;
  v.pass = in(line.slope, 0.40, 0.60);
  v.detail = detail + "slope=" + fmt("%.3f", line.slope) + " (need 0.50 +- 0.10)";
  return v;
}

Verdict ac3() {
  const auto pa = run("model=PA n_nodes=10000 m=1 cutoffs=10 realizations=10 master_seed=301");
  const auto& p = point(pa, "pa_n10000_m1_kc10");
  const bool all_ten = std::all_of(p.records.begin(), p.records.end(), [](const auto& r) { return r.k_max == 10; });
  const auto cm = run("model=CM n_nodes=10000 m=1 gamma_target=3 cutoffs=10 realizations=10 master_seed=302");
  const auto& c = point(cm, "cm_n10000_m1_kc10_g3");
  Verdict v;
  v.pass = all_ten && p.spike && p.spike->excess_ratio > 2.0 && c.spike && c.spike->excess_ratio < 1.5;
  v.detail = std::string("PA k_max==10 in all realizations: ") + (all_ten ? "yes" : "no") +
             "; PA excess=" + fmt("%.2f", p.spike ? p.spike->excess_ratio : 0.0) +
             " (need >2); CM(gamma=3) excess=" + fmt("%.2f", c.spike ? c.spike->excess_ratio : 0.0) + " (need <1.5)";
  return v;
}

Verdict ac4() {
  const auto r = run("model=PA n_nodes=100000 m=1 cutoffs=10,20,40,none realizations=10 master_seed=401");
  std::vector<ExponentFit> fits;
  std::string detail;
  for (const char* kc : {"10", "20", "40", "none"}) {
    fits.push_back(*point(r, std::string("pa_n100000_m1_kc") + kc).fit);
    detail += std::string("kc=") + kc + " gamma=" + fmt("%.3f", fits.back().gamma_hat) + "+-" +
              fmt("%.3f", fits.back().std_error) + "; ";
  }
  // Adjacent pairs: a decrease is an inversion; it is tolerated once, and
  // only if it lies inside the joint error bar.
  int inversions = 0;
  bool outside = false;
  for (std::size_t i = 1; i < fits.size(); ++i) {
    const double drop = fits[i - 1].gamma_hat - fits[i].gamma_hat;
    if (drop > 0.0) {
      ++inversions;
      outside = outside || drop > std::hypot(fits[i - 1].std_error, fits[i].std_error);
    }
  }
  Verdict v;
  v.pass = inversions <= 1 && !outside;
  v.detail = detail + std::to_string(inversions) + " inversion(s)";
  return v;
}

Verdict ac5() {
  const auto r = run(
      "model=CM n_nodes=10000 m=1,2 gamma_target=2.2,2.6,3.0 cutoffs=100 realizations=10 master_seed=501");
  bool pass = true;
  std::string detail;
  for (const char* g : {"2.2", "2.6", "3"}) {
    const double target = std::stod(g);
    const auto& m1 = point(r, std::string("cm_n10000_m1_kc100_g") + g);
    const auto& m2 = point(r, std::string("cm_n10000_m2_kc100_g") + g);
    const auto split = std::count_if(m1.records.begin(), m1.records.end(), [](const auto& x) { return x.giant_fraction < 1.0; });
    const auto whole = std::count_if(m2.records.begin(), m2.records.end(), [](const auto& x) { return x.giant_fraction >= 0.99; });
    const bool ok = std::abs(m1.fit->gamma_hat - target) <= 0.15 && split >= 9 && whole == 10;
    pass = pass && ok;
    detail += std::string("target ") + g + ": gamma=" + fmt("%.3f", m1.fit->gamma_hat) + ", m=1 split " +
              std::to_string(split) + "/10, m=2 giant>=0.99N " + std::to_string(whole) + "/10; ";
  }
  return {pass, detail + "(need +-0.15, >=9/10, 10/10)"};
}

Verdict ac6() {
  GeneratorConfig cfg;
  cfg.model = Model::HAPA;
  cfg.n_nodes = 10000;
  cfg.stubs = 1;
  const auto free = realizations(cfg, 10, 601);
  const auto hubs = std::count_if(free.begin(), free.end(), [](const Graph& g) { return g.max_degree() > 1000; });
  cfg.hard_cutoff = 10;
  const auto capped = realizations(cfg, 10, 602);
  const auto at_ten = std::count_if(capped.begin(), capped.end(), [](const Graph& g) { return g.max_degree() == 10; });
  std::size_t biggest = 0;
  for (const auto& g : free) biggest = std::max(biggest, g.max_degree());
  return {hubs >= 9 && at_ten == 10, "no cutoff: k_max > 0.1N in " + std::to_string(hubs) + "/10 (largest " +
                                          std::to_string(biggest) + "); k_c=10: k_max==10 in " +
                                          std::to_string(at_ten) + "/10"};
}

// Shape is judged over the whole observed support [max(m,2), k_max].
Verdict ac7() {
  GeneratorConfig cfg;
  cfg.model = Model::DAPA;
  cfg.n_nodes = 10000;
  cfg.stubs = 1;
  SubstrateConfig sub;
  sub.n_substrate = 20000;
  sub.radius = grn_radius_for_mean_degree(20000, 10.0);
  cfg.substrate = sub;
  std::map<std::size_t, int> hits;
  std::string detail;
  for (std::size_t tau : {2, 50}) {
    cfg.tau_sub = tau;
    const Shape want = tau == 2 ? Shape::Exponential : Shape::PowerLaw;
    int ok = 0;
    for (const auto& g : realizations(cfg, 10, 700 + tau)) {
      const auto h = degree_histogram(g);
      ok += classify_distribution(h, 2, h.max_degree()).shape == want;
    }
    hits[tau] = ok;
    detail += "tau_sub=" + std::to_string(tau) + ": " + to_string(want) + " in " + std::to_string(ok) + "/10; ";
  }
  return {hits[2] >= 8 && hits[50] >= 8, detail + "(need >=8/10 each)"};
}

Verdict ac8() {
  const auto means = parallel_map<double>(10, [](std::size_t r) {
    SubstrateConfig cfg;
    cfg.n_substrate = 10000;
    cfg.radius = 0.012;
    cfg.seed = realization_seed(801, 0, r);
    const auto s = generate_substrate(cfg);
    return 2.0 * static_cast<double>(s.graph.edge_count()) / 10000.0;
  });
  double mean = 0.0;
  for (double m : means) mean += m / 10.0;
  return {std::abs(mean - 4.52) <= 0.25, "mean degree " + fmt("%.3f", mean) + " (need 4.52 +- 0.25)"};
}

Verdict ac9() {
  using namespace p2pnet::testing;
  Rng rng(901);
  std::size_t mismatches = 0;
  std::size_t checks = 0;
  std::size_t connected = 0;
  std::size_t sweeps_failed = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + rng.index(199);
    Graph g;
    if (i % 2 == 0) {
      g = random_graph(n, (0.5 + 3.5 * rng.uniform()) / static_cast<double>(n), rng);
    } else {
      GeneratorConfig cfg;
      cfg.n_nodes = std::max<std::size_t>(n, 4);
      cfg.stubs = 1 + rng.index(2);
      cfg.seed = rng.next();
      g = generate(cfg).graph;
    }
    const auto fw = floyd_warshall(g);
    const std::size_t nn = g.node_count();
    std::uint32_t diameter = 0;
    for (std::size_t s = 0; s < nn; ++s) {
      for (std::size_t t = 0; t < nn; ++t) {
        if (fw[s][t] != kInf) diameter = std::max(diameter, fw[s][t]);
      }
    }
    for (NodeId s = 0; s < nn; ++s) {
      for (std::uint32_t tau = 1; tau <= diameter + 1; ++tau) {
        std::size_t ball = 0;
        for (std::size_t t = 0; t < nn; ++t) ball += t != s && fw[s][t] <= tau;
        SearchConfig cfg;
        cfg.source = s;
        cfg.ttl = tau;
        mismatches += flood_search(g, cfg).hits != ball;
        ++checks;
      }
    }
    if (giant_component(g).size == nn) {
      ++connected;
      for (NodeId s = 0; s < nn; ++s) {
        SearchConfig cfg;
        cfg.source = s;
        cfg.ttl = std::max<std::uint32_t>(diameter, 1);
        sweeps_failed += flood_search(g, cfg).hits != nn - 1;
      }
    }
  }
  return {mismatches == 0 && sweeps_failed == 0 && connected > 0,
          std::to_string(checks) + " (graph, source, tau) checks, " + std::to_string(mismatches) + " mismatches; " +
              std::to_string(connected) + " connected graphs, " + std::to_string(sweeps_failed) +
              " incomplete sweeps at tau=diameter"};
}

// Two independent ensembles; one-sided z test at 95%.
Verdict ac10() {
  const auto r = run(
      "model=PA n_nodes=10000 m=1 cutoffs=10,none realizations=10 n_sources=100 search=NF,RW_NF ttl_min=1 "
      "ttl_max=10 master_seed=1001");
  const auto& capped = point(r, "pa_n10000_m1_kc10");
  const auto& free = point(r, "pa_n10000_m1_kcnone");
  bool pass = true;
  std::string detail;
  for (auto kind : {CurveKind::NF, CurveKind::BudgetedRW}) {
    const auto a = capped.curve(kind);
    const auto b = free.curve(kind);
    std::string failed;
    std::string zs;
    for (std::size_t t = 0; t < a.size(); ++t) {
      if (a[t].tau < 3 || a[t].tau > 8) continue;
      const double se = std::hypot(a[t].stderr_hits, b[t].stderr_hits);
      const double z = se > 0.0 ? (a[t].mean_hits - b[t].mean_hits) / se : 0.0;
      zs += fmt(" %.2f", z);
      if (!(z > 1.645)) failed += " " + std::to_string(a[t].tau);
    }
    pass = pass && failed.empty();
    detail += to_string(kind) + " z(tau=3..8):" + zs + (failed.empty() ? " ok" : "; not significant at tau" + failed) + "; ";
  }
  return {pass, detail + "(need z > 1.645)"};
}

// Paired per source: the walk's budget is that source's NF message count.
Verdict ac11() {
  bool pass = true;
  std::string detail;
  const std::pair<const char*, const char*> setups[] = {
      {"model=PA", "pa"}, {"model=CM gamma_target=2.6 cutoffs=100", "cm"}};
  for (const auto& [model, tag] : setups) {
    const auto r = run(std::string(model) +
                       " n_nodes=10000 m=2,3 realizations=10 n_sources=100 search=NF,RW_NF ttl_min=1 ttl_max=10 "
                       "master_seed=1101");
    for (const auto& p : r.points) {
      if (p.failure) throw std::runtime_error(p.point.label + " failed: " + *p.failure);
      const auto& nf = p.curve_samples[curve_index(p, CurveKind::NF)];
      const auto& rw = p.curve_samples[curve_index(p, CurveKind::BudgetedRW)];
      double worst = 1e300;
      std::string bad;
      for (std::size_t t = 0; t < nf.ttls.size(); ++t) {
        const auto& a = nf.outcomes[t];
        const auto& b = rw.outcomes[t];
        const double n = static_cast<double>(a.size());
        double mean = 0.0;
        for (std::size_t s = 0; s < a.size(); ++s) mean += (static_cast<double>(a[s].hits) - static_cast<double>(b[s].hits)) / n;
        double ss = 0.0;
        for (std::size_t s = 0; s < a.size(); ++s) {
          const double d = static_cast<double>(a[s].hits) - static_cast<double>(b[s].hits) - mean;
          ss += d * d;
        }
        const double se = std::sqrt(ss / (n - 1.0) / n);
        // RW beats NF significantly only if the paired difference sits
        // below -1.645 standard errors.
        if (mean < -1.645 * se) bad += " " + std::to_string(nf.ttls[t]);
        if (se > 0.0) worst = std::min(worst, mean / se);
      }
      pass = pass && bad.empty();
      if (!detail.empty()) detail += "; ";
      detail += p.point.label + (bad.empty() ? " ok" : " RW>NF at tau" + bad) + " (min z " + fmt("%.2f", worst) + ")";
    }
  }
  return {pass, detail};
}

Verdict ac12() {
  const char* specs[] = {
      "model=PA n_nodes=2000 m=1,2 cutoffs=10,none realizations=3 n_sources=20 search=FL,NF,RW,RW_NF ttl_max=6",
      "model=CM n_nodes=2000 m=1 gamma_target=2.5 cutoffs=50 realizations=3 n_sources=20 search=NF,RW_NF",
      "model=HAPA n_nodes=2000 m=2 cutoffs=20 realizations=3 n_sources=20 search=RW",
      "model=DAPA n_nodes=1000 m=1 tau_sub=3 n_substrate=2000 realizations=3 n_sources=20 search=NF",
  };
  const fs::path root = fs::temp_directory_path() / "p2pnet_acceptance_determinism";
  std::size_t compared = 0;
  std::size_t differing = 0;
  for (std::size_t i = 0; i < std::size(specs); ++i) {
    const auto spec = parse_spec(std::string(specs[i]) + " master_seed=1201");
    std::vector<std::map<std::string, std::string>> runs;
    for (std::size_t w : {std::size_t{1}, workers() + 1}) {
      const fs::path dir = root / std::to_string(i) / std::to_string(w);
      fs::remove_all(dir);
      RunOptions opts;
      opts.workers = w;
      EmitOptions emit;
      emit.per_realization = true;
      emit_outputs(run_experiment(spec, opts), dir, emit);
      std::map<std::string, std::string> files;
      for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        files[fs::relative(e.path(), dir).string()] = ss.str();
      }
      runs.push_back(std::move(files));
    }
    compared += runs[0].size();
    for (const auto& [name, bytes] : runs[0]) differing += !runs[1].contains(name) || runs[1].at(name) != bytes;
    differing += runs[0].size() != runs[1].size();
  }
  fs::remove_all(root);
  return {differing == 0 && compared > 0, std::to_string(compared) + " files compared across repeated runs, " +
                                              std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"AC1 PA exponent", ac1},
      {"AC2 natural-cutoff scaling", ac2},
      {"AC3 hard-cutoff spike", ac3},
      {"AC4 exponent vs cutoff trend", ac4},
      {"AC5 CM fidelity and connectivity", ac5},
      {"AC6 HAPA star regime", ac6},
      {"AC7 DAPA shape transition", ac7},
      {"AC8 GRN calibration", ac8},
      {"AC9 FL equals BFS ball", ac9},
      {"AC10 cutoff helps NF and budgeted RW", ac10},
      {"AC11 NF not beaten by budgeted RW", ac11},
      {"AC12 determinism", ac12},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !v.pass;
    std::printf("%s %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
