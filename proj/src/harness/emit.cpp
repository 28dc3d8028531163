#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "p2pnet/errors.hpp"
#include "p2pnet/harness.hpp"

namespace p2pnet {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kManifest = "manifest.json";

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

ordered_json fit_json(const ExponentFit& f) {
  return ordered_json{{"gamma_hat", f.gamma_hat},  {"stderr", f.std_error}, {"k_lo", f.k_lo},
                      {"k_hi", f.k_hi},            {"r_squared", f.r_squared}, {"method", to_string(f.method)}};
}

std::string report_json(const SweepResult& r) {
  const auto& c = r.point.config;
  ordered_json j;
  j["label"] = r.point.label;
  j["sweep_index"] = r.point.index;
  j["model"] = to_string(c.model);
  j["n_nodes"] = c.n_nodes;
  j["m"] = c.stubs;
  j["hard_cutoff"] = c.hard_cutoff ? ordered_json(*c.hard_cutoff) : ordered_json(nullptr);
  if (c.model == Model::CM) j["gamma_target"] = c.gamma_target;
  if (c.model == Model::DAPA) {
    j["tau_sub"] = c.tau_sub;
    j["n_substrate"] = c.substrate->n_substrate;
    j["radius"] = c.substrate->radius;
  }
  j["realizations"] = r.records.size();
  j["fit"] = r.fit ? fit_json(*r.fit) : ordered_json(nullptr);
  j["fit_mle"] = r.fit_mle ? fit_json(*r.fit_mle) : ordered_json(nullptr);
  if (r.fit_error) j["fit_error"] = *r.fit_error;
  if (r.spike) {
    j["spike"] = {{"observed", r.spike->observed},
                  {"extrapolated", r.spike->extrapolated},
                  {"excess_ratio", r.spike->excess_ratio}};
  }
  j["mean_k_max"] = r.mean_k_max;
  j["stderr_k_max"] = r.stderr_k_max;
  j["mean_giant_fraction"] = r.mean_giant_fraction;
  j["mean_removed_self_loops"] = r.mean_removed_self_loops;
  j["mean_removed_multi_edges"] = r.mean_removed_multi_edges;
  const auto zero = r.pooled.counts.find(0);
  j["zero_degree_nodes"] = zero == r.pooled.counts.end() ? 0 : zero->second;
  return j.dump(2) + "\n";
}

std::string realizations_csv(const SweepResult& r) {
  std::string out = "realization,seed,k_max,min_degree,giant_fraction,removed_self_loops,removed_multi_edges\n";
  char buf[200];
  for (const auto& rec : r.records) {
    std::snprintf(buf, sizeof buf, "%zu,%llu,%zu,%zu,%.10g,%zu,%zu\n", rec.realization,
                  static_cast<unsigned long long>(rec.seed), rec.k_max, rec.min_degree, rec.giant_fraction,
                  rec.removed_self_loops, rec.removed_multi_edges);
    out += buf;
  }
  return out;
}

// Removes what a previous run listed in its manifest, so stale sweep points
// do not survive an overwrite. Anything else in the directory is left alone.
void remove_previous_outputs(const fs::path& dir) {
  const fs::path manifest = dir / kManifest;
  if (!fs::exists(manifest)) return;
  std::ifstream in(manifest);
  ordered_json old;
  try {
    old = ordered_json::parse(in);
  } catch (const nlohmann::json::exception&) {
    return;
  }
  std::error_code ec;
  if (old.contains("files")) {
    for (const auto& f : old["files"]) {
      if (!f.is_string()) continue;
      const fs::path rel(f.get<std::string>());
      if (rel.is_absolute() || rel.string().find("..") != std::string::npos) continue;
      fs::remove(dir / rel, ec);
      if (rel.has_parent_path() && fs::is_empty(dir / rel.parent_path(), ec)) fs::remove(dir / rel.parent_path(), ec);
    }
  }
  fs::remove(manifest, ec);
}

}  // namespace

void prepare_output_dir(const fs::path& dir, bool overwrite) {
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    if (!fs::is_directory(dir, ec)) throw IoError(dir.string() + " exists and is not a directory");
    if (!fs::is_empty(dir, ec) && !overwrite) {
      throw IoError(dir.string() + " is not empty; pass --overwrite to replace its contents");
    }
  } else {
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  }
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError(dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

std::vector<std::string> emit_outputs(const EnsembleResult& result, const fs::path& dir, const EmitOptions& opts) {
  prepare_output_dir(dir, opts.overwrite);
  if (opts.overwrite) remove_previous_outputs(dir);

  std::vector<std::string> files;
  ordered_json points = ordered_json::array();
  for (const auto& r : result.points) {
    ordered_json entry{{"label", r.point.label}, {"sweep_index", r.point.index}};
    if (r.failure) {
      entry["status"] = "failed";
      entry["error"] = *r.failure;
      points.push_back(entry);
      continue;
    }
    entry["status"] = "ok";
    const fs::path sub = dir / r.point.label;
    std::error_code ec;
    fs::create_directories(sub, ec);
    if (ec) throw IoError("cannot create " + sub.string() + ": " + ec.message());

    auto emit = [&](const std::string& name, const std::string& content) {
      write_file(sub / name, content);
      files.push_back(r.point.label + "/" + name);
    };

    std::ostringstream hist;
    write_histogram_csv(r.pooled, hist);
    emit("histogram.csv", hist.str());

    std::ostringstream bins;
    write_log_bins_csv(log_bin_histogram(r.pooled, result.spec.bins_per_decade), bins);
    emit("logbin.csv", bins.str());

    emit("report.json", report_json(r));

    for (auto kind : r.curve_kinds) {
      std::ostringstream curve;
      write_curve_csv(r.curve(kind), curve);
      emit("search_" + to_string(kind) + ".csv", curve.str());
    }
    if (opts.per_realization) emit("realizations.csv", realizations_csv(r));
    points.push_back(entry);
  }

  ordered_json manifest;
  manifest["spec"] = result.spec.text;
  manifest["master_seed"] = result.spec.master_seed;
  manifest["points"] = points;
  manifest["files"] = files;
  write_file(dir / kManifest, manifest.dump(2) + "\n");
  files.emplace_back(kManifest);
  return files;
}

}  // namespace p2pnet
