#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "p2pnet/errors.hpp"
#include "p2pnet/harness.hpp"

namespace p2pnet {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "model",       "n_nodes",     "m",           "cutoffs",         "gamma_target", "tau_sub",
      "substrate",   "n_substrate", "substrate_degree", "radius",     "dimensions",   "acceptance",
      "realizations", "search",     "ttl_min",     "ttl_max",         "n_sources",    "bins_per_decade",
      "master_seed", "output_dir"};
  return keys;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) items.push_back(item);
  if (!value.empty() && value.back() == ',') items.emplace_back();
  return items;
}

template <typename T>
T parse_unsigned(const std::string& key, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw SpecError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

double parse_real(const std::string& key, const std::string& text) {
  // std::from_chars for double is missing from older libstdc++.
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(value)) {
    throw SpecError(key + ": expected a real number, got '" + text + "'");
  }
  return value;
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& key, const std::string& value, F&& one) {
  std::vector<T> out;
  for (const auto& item : split_list(value)) out.push_back(one(key, item));
  if (out.empty()) throw SpecError(key + ": empty list");
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::vector<std::uint32_t> ExperimentSpec::ttls() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t t = ttl_min; t <= ttl_max; ++t) out.push_back(t);
  return out;
}

ExperimentSpec parse_spec(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string token;
    while (tokens >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos || eq == 0) throw SpecError("expected key=value, got '" + token + "'");
      const std::string key = token.substr(0, eq);
      if (!known_keys().contains(key)) throw SpecError("unknown key '" + key + "'");
      if (!kv.emplace(key, token.substr(eq + 1)).second) throw SpecError("duplicate key '" + key + "'");
    }
  }

  ExperimentSpec spec;
  spec.text = text;
  for (const char* required : {"model", "n_nodes", "m"}) {
    if (!kv.contains(required)) throw SpecError(std::string("missing required key '") + required + "'");
  }

  try {
    spec.model = parse_model(kv["model"]);
  } catch (const InputError& e) {
    throw SpecError(std::string("model: ") + e.what());
  }
  auto as_size = [](const std::string& k, const std::string& v) { return parse_unsigned<std::size_t>(k, v); };
  spec.n_nodes = parse_list<std::size_t>("n_nodes", kv["n_nodes"], as_size);
  spec.stubs = parse_list<std::size_t>("m", kv["m"], as_size);

  if (kv.contains("cutoffs")) {
    spec.cutoffs = parse_list<std::optional<std::size_t>>(
        "cutoffs", kv["cutoffs"], [&](const std::string& k, const std::string& v) -> std::optional<std::size_t> {
          if (lower(v) == "none") return std::nullopt;
          return as_size(k, v);
        });
  }
  if (kv.contains("gamma_target")) {
    spec.gamma_targets = parse_list<double>("gamma_target", kv["gamma_target"], parse_real);
  } else if (spec.model == Model::CM) {
    throw SpecError("missing required key 'gamma_target' (needed for model=CM)");
  }
  if (kv.contains("tau_sub")) {
    spec.tau_subs = parse_list<std::size_t>("tau_sub", kv["tau_sub"], as_size);
  } else if (spec.model == Model::DAPA) {
    throw SpecError("missing required key 'tau_sub' (needed for model=DAPA)");
  }

  if (kv.contains("substrate")) {
    const auto s = lower(kv["substrate"]);
    if (s == "grn") {
      spec.substrate_kind = SubstrateKind::Grn;
    } else if (s == "mesh") {
      spec.substrate_kind = SubstrateKind::Mesh;
    } else {
      throw SpecError("substrate: expected grn or mesh, got '" + kv["substrate"] + "'");
    }
  }
  if (kv.contains("n_substrate")) spec.n_substrate = as_size("n_substrate", kv["n_substrate"]);
  if (kv.contains("substrate_degree")) spec.substrate_degree = parse_real("substrate_degree", kv["substrate_degree"]);
  if (kv.contains("radius")) spec.radius = parse_real("radius", kv["radius"]);
  if (kv.contains("dimensions")) spec.dimensions = as_size("dimensions", kv["dimensions"]);
  if (kv.contains("acceptance")) {
    const auto a = lower(kv["acceptance"]);
    if (a == "max_degree") {
      spec.acceptance = AcceptanceBound::MaxDegree;
    } else if (a == "total_degree") {
      spec.acceptance = AcceptanceBound::TotalDegree;
    } else {
      throw SpecError("acceptance: expected max_degree or total_degree, got '" + kv["acceptance"] + "'");
    }
  }
  if (kv.contains("realizations")) spec.realizations = as_size("realizations", kv["realizations"]);
  if (kv.contains("search")) {
    spec.searches = parse_list<CurveKind>("search", kv["search"], [](const std::string& k, const std::string& v) {
      try {
        return parse_curve_kind(v);
      } catch (const InputError& e) {
        throw SpecError(k + ": " + e.what());
      }
    });
  }
  if (kv.contains("ttl_min")) spec.ttl_min = parse_unsigned<std::uint32_t>("ttl_min", kv["ttl_min"]);
  if (kv.contains("ttl_max")) spec.ttl_max = parse_unsigned<std::uint32_t>("ttl_max", kv["ttl_max"]);
  if (kv.contains("n_sources")) spec.n_sources = as_size("n_sources", kv["n_sources"]);
  if (kv.contains("bins_per_decade")) spec.bins_per_decade = as_size("bins_per_decade", kv["bins_per_decade"]);
  if (kv.contains("master_seed")) spec.master_seed = parse_unsigned<std::uint64_t>("master_seed", kv["master_seed"]);
  if (kv.contains("output_dir")) spec.output_dir = kv["output_dir"];

  // Constraints.
  if (spec.realizations < 1) throw SpecError("realizations: must be >= 1");
  if (spec.n_sources < 1) throw SpecError("n_sources: must be >= 1");
  if (spec.bins_per_decade < 1) throw SpecError("bins_per_decade: must be >= 1");
  if (spec.ttl_min < 1 || spec.ttl_max < spec.ttl_min) throw SpecError("ttl_min/ttl_max: need 1 <= ttl_min <= ttl_max");
  if (spec.dimensions < 1) throw SpecError("dimensions: must be >= 1");
  if (spec.radius && !(*spec.radius > 0.0)) throw SpecError("radius: must be > 0");
  if (!(spec.substrate_degree > 0.0)) throw SpecError("substrate_degree: must be > 0");
  for (auto m : spec.stubs) {
    if (m < 1) throw SpecError("m: must be >= 1");
    for (const auto& kc : spec.cutoffs) {
      if (kc && *kc <= m) {
        throw SpecError("cutoffs: k_c=" + std::to_string(*kc) + " must exceed m=" + std::to_string(m));
      }
    }
    for (auto n : spec.n_nodes) {
      if ((spec.model == Model::PA || spec.model == Model::HAPA) && n < m + 2) {
        throw SpecError("n_nodes: " + std::to_string(n) + " is below m+2 for m=" + std::to_string(m));
      }
    }
  }
  for (auto n : spec.n_nodes) {
    if (n < 2) throw SpecError("n_nodes: must be >= 2");
    if (spec.model == Model::DAPA && spec.n_substrate && *spec.n_substrate < n) {
      throw SpecError("n_substrate: must be >= every n_nodes");
    }
  }
  for (double g : spec.gamma_targets) {
    if (!(g > 1.0)) throw SpecError("gamma_target: must be > 1");
  }
  for (auto t : spec.tau_subs) {
    if (t < 1) throw SpecError("tau_sub: must be >= 1");
  }
  return spec;
}

std::uint64_t realization_seed(std::uint64_t master_seed, std::size_t sweep_index, std::size_t realization) {
  return derive_seed(master_seed, {sweep_index, realization});
}

std::vector<SweepPoint> expand_sweep(const ExperimentSpec& spec) {
  std::vector<SweepPoint> points;
  const bool cm = spec.model == Model::CM;
  const bool dapa = spec.model == Model::DAPA;
  const std::vector<double> gammas = cm ? spec.gamma_targets : std::vector<double>{spec.gamma_targets.front()};
  const std::vector<std::size_t> taus = dapa ? spec.tau_subs : std::vector<std::size_t>{spec.tau_subs.front()};
  for (auto n : spec.n_nodes) {
    for (auto m : spec.stubs) {
      for (const auto& kc : spec.cutoffs) {
        for (double g : gammas) {
          for (auto tau : taus) {
            SweepPoint p;
            p.index = points.size();
            auto& c = p.config;
            c.model = spec.model;
            c.n_nodes = n;
            c.stubs = m;
            c.hard_cutoff = kc;
            c.gamma_target = g;
            c.tau_sub = tau;
            c.acceptance = spec.acceptance;
            std::string label = lower(to_string(spec.model)) + "_n" + std::to_string(n) + "_m" + std::to_string(m) +
                                "_kc" + (kc ? std::to_string(*kc) : std::string("none"));
            if (cm) {
              char buf[32];
              std::snprintf(buf, sizeof buf, "_g%g", g);
              label += buf;
            }
            if (dapa) {
              SubstrateConfig sub;
              sub.kind = spec.substrate_kind;
              sub.n_substrate = spec.n_substrate.value_or(2 * n);
              sub.dimensions = spec.dimensions;
              sub.radius = spec.radius.value_or(grn_radius_for_mean_degree(sub.n_substrate, spec.substrate_degree, sub.dimensions));
              c.substrate = sub;
              label += "_tau" + std::to_string(tau);
            }
            p.label = std::move(label);
            points.push_back(std::move(p));
          }
        }
      }
    }
  }
  return points;
}

}  // namespace p2pnet
