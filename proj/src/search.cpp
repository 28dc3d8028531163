#include "p2pnet/search.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "p2pnet/errors.hpp"
#include "p2pnet/rng.hpp"

namespace p2pnet {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::FL: return "FL";
    case Algorithm::NF: return "NF";
    case Algorithm::RW: return "RW";
  }
  return "?";
}

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

void require_source(const Graph& g, const SearchConfig& cfg) {
  if (cfg.source >= g.node_count()) throw InputError("search source out of range");
  if (cfg.target && *cfg.target >= g.node_count()) throw InputError("search target out of range");
}

// Hop-synchronous flood shared by FL and NF. `pick` fills `out` with the
// recipients of a node's first copy given the sender (nullopt at the source).
template <typename Pick>
SearchOutcome level_flood(const Graph& g, const SearchConfig& cfg, Pick&& pick) {
  require_source(g, cfg);
  SearchOutcome res{0, 0, cfg.ttl, cfg.source, std::nullopt};
  if (cfg.target && *cfg.target == cfg.source) res.delivery_hops = 0;

  std::vector<char> seen(g.node_count(), 0);
  seen[cfg.source] = 1;
  struct Holder {
    NodeId node;
    std::optional<NodeId> sender;
  };
  std::vector<Holder> frontier{{cfg.source, std::nullopt}};
  std::vector<Holder> next;
  std::vector<NodeId> recipients;

  for (std::uint32_t hop = 0; hop < cfg.ttl && !frontier.empty(); ++hop) {
    next.clear();
    for (const auto& [u, sender] : frontier) {
      pick(u, sender, recipients);
      for (NodeId v : recipients) {
        ++res.messages;
        if (seen[v]) continue;
        seen[v] = 1;
        ++res.hits;
        if (cfg.target && v == *cfg.target) res.delivery_hops = hop + 1;
        next.push_back({v, u});
      }
    }
    std::swap(frontier, next);
  }
  return res;
}

void all_but(const Graph& g, NodeId u, std::optional<NodeId> sender, std::vector<NodeId>& out) {
  out.clear();
  for (NodeId v : g.neighbors(u)) {
    if (!sender || v != *sender) out.push_back(v);
  }
}

}  // namespace

Algorithm parse_algorithm(const std::string& name) {
  const auto u = upper(name);
  if (u == "FL") return Algorithm::FL;
  if (u == "NF") return Algorithm::NF;
  if (u == "RW") return Algorithm::RW;
  throw InputError("unknown search algorithm '" + name + "' (expected FL, NF or RW)");
}

SearchOutcome flood_search(const Graph& g, const SearchConfig& cfg) {
  return level_flood(g, cfg, [&](NodeId u, std::optional<NodeId> sender, std::vector<NodeId>& out) {
    all_but(g, u, sender, out);
  });
}

SearchOutcome normalized_flood_search(const Graph& g, const SearchConfig& cfg) {
  if (cfg.k_min < 1) throw InputError("normalized flooding needs k_min >= 1");
  Rng rng(cfg.rng_seed);
  const std::size_t k_min = cfg.k_min;
  return level_flood(g, cfg, [&](NodeId u, std::optional<NodeId> sender, std::vector<NodeId>& out) {
    all_but(g, u, sender, out);
    // Nodes of degree <= k_min pass the copy to everyone but the sender.
    if (sender && g.degree(u) <= k_min) return;
    if (out.size() <= k_min) return;
    // Partial Fisher-Yates: the first k_min entries become a uniform subset.
    for (std::size_t i = 0; i < k_min; ++i) std::swap(out[i], out[i + rng.index(out.size() - i)]);
    out.resize(k_min);
  });
}

SearchOutcome random_walk_search(const Graph& g, const SearchConfig& cfg) {
  require_source(g, cfg);
  if (g.degree(cfg.source) == 0) throw DegenerateInputError("random walk from an isolated source");
  Rng rng(cfg.rng_seed);
  SearchOutcome res{0, 0, cfg.ttl, cfg.source, std::nullopt};
  if (cfg.target && *cfg.target == cfg.source) {
    res.delivery_hops = 0;
    return res;
  }

  std::vector<char> seen(g.node_count(), 0);
  seen[cfg.source] = 1;
  NodeId pos = cfg.source;
  std::optional<NodeId> prev;
  for (std::uint32_t step = 1; step <= cfg.ttl; ++step) {
    const auto nbrs = g.neighbors(pos);
    NodeId next = 0;
    if (!prev) {
      next = nbrs[rng.index(nbrs.size())];
    } else if (nbrs.size() == 1) {
      next = nbrs[0];  // dead end: step back
    } else {
      // Uniform over the neighbors other than prev.
      const auto back = static_cast<std::size_t>(std::lower_bound(nbrs.begin(), nbrs.end(), *prev) - nbrs.begin());
      std::size_t r = rng.index(nbrs.size() - 1);
      if (r >= back) ++r;
      next = nbrs[r];
    }
    prev = pos;
    pos = next;
    ++res.messages;
    if (!seen[pos]) {
      seen[pos] = 1;
      ++res.hits;
    }
    if (cfg.target && pos == *cfg.target) {
      res.delivery_hops = step;
      break;
    }
  }
  return res;
}

SearchOutcome run_search(const Graph& g, const SearchConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::FL: return flood_search(g, cfg);
    case Algorithm::NF: return normalized_flood_search(g, cfg);
    case Algorithm::RW: return random_walk_search(g, cfg);
  }
  throw InputError("unknown algorithm");
}

std::string to_string(CurveKind k) {
  switch (k) {
    case CurveKind::FL: return "FL";
    case CurveKind::NF: return "NF";
    case CurveKind::RW: return "RW";
    case CurveKind::BudgetedRW: return "RW_NF";
  }
  return "?";
}

CurveKind parse_curve_kind(const std::string& name) {
  const auto u = upper(name);
  if (u == "FL") return CurveKind::FL;
  if (u == "NF") return CurveKind::NF;
  if (u == "RW") return CurveKind::RW;
  if (u == "RW_NF") return CurveKind::BudgetedRW;
  throw InputError("unknown search curve '" + name + "' (expected FL, NF, RW or RW_NF)");
}

void CurveSamples::append(const CurveSamples& other) {
  if (outcomes.empty()) {
    *this = other;
    return;
  }
  if (other.ttls != ttls) throw InputError("cannot pool search samples over different ttl lists");
  for (std::size_t t = 0; t < ttls.size(); ++t) {
    outcomes[t].insert(outcomes[t].end(), other.outcomes[t].begin(), other.outcomes[t].end());
  }
}

CurveSamples sample_search_curve(const Graph& g, const CurveRequest& req) {
  if (req.n_sources < 1) throw InputError("need at least one source");
  if (g.node_count() == 0) throw DegenerateInputError("search on an empty graph");
  CurveSamples out{req.ttls, std::vector<std::vector<SearchOutcome>>(req.ttls.size())};

  Rng picker(derive_seed(req.seed, {0}));
  std::vector<NodeId> sources(req.n_sources);
  for (auto& s : sources) s = static_cast<NodeId>(picker.index(g.node_count()));

  for (std::size_t t = 0; t < req.ttls.size(); ++t) {
    const std::uint32_t tau = req.ttls[t];
    auto& row = out.outcomes[t];
    row.reserve(sources.size());
    for (std::size_t i = 0; i < sources.size(); ++i) {
      SearchConfig cfg;
      cfg.source = sources[i];
      cfg.ttl = tau;
      cfg.k_min = req.k_min;
      cfg.rng_seed = derive_seed(req.seed, {i + 1, 1});
      SearchOutcome zero{0, 0, tau, sources[i], std::nullopt};
      switch (req.kind) {
        case CurveKind::FL:
          row.push_back(flood_search(g, cfg));
          break;
        case CurveKind::NF:
          row.push_back(normalized_flood_search(g, cfg));
          break;
        case CurveKind::RW:
          row.push_back(g.degree(cfg.source) == 0 ? zero : random_walk_search(g, cfg));
          break;
        case CurveKind::BudgetedRW: {
          const auto nf = normalized_flood_search(g, cfg);
          const auto budget = normalized_rw_budget(nf);
          if (budget == 0 || g.degree(cfg.source) == 0) {
            row.push_back(zero);
            break;
          }
          SearchConfig walk = cfg;
          walk.ttl = static_cast<std::uint32_t>(budget);
          walk.rng_seed = derive_seed(req.seed, {i + 1, 2});
          auto res = random_walk_search(g, walk);
          row.push_back(res);
          break;
        }
      }
    }
  }
  return out;
}

std::vector<CurvePoint> summarize(const CurveSamples& samples) {
  std::vector<CurvePoint> curve;
  curve.reserve(samples.ttls.size());
  auto mean_stderr = [](const std::vector<SearchOutcome>& row, auto field) {
    const double n = static_cast<double>(row.size());
    double sum = 0.0;
    for (const auto& o : row) sum += static_cast<double>(field(o));
    const double mean = sum / n;
    if (row.size() < 2) return std::pair{mean, 0.0};
    double ss = 0.0;
    for (const auto& o : row) {
      const double d = static_cast<double>(field(o)) - mean;
      ss += d * d;
    }
    return std::pair{mean, std::sqrt(ss / (n - 1.0) / n)};
  };
  for (std::size_t t = 0; t < samples.ttls.size(); ++t) {
    const auto& row = samples.outcomes[t];
    CurvePoint p;
    p.tau = samples.ttls[t];
    p.samples = row.size();
    if (!row.empty()) {
      std::tie(p.mean_hits, p.stderr_hits) = mean_stderr(row, [](const SearchOutcome& o) { return o.hits; });
      std::tie(p.mean_messages, p.stderr_messages) =
          mean_stderr(row, [](const SearchOutcome& o) { return o.messages; });
    }
    curve.push_back(p);
  }
  return curve;
}

std::vector<CurvePoint> measure_search_curve(const Graph& g, const CurveRequest& req) {
  return summarize(sample_search_curve(g, req));
}

void write_curve_csv(const std::vector<CurvePoint>& curve, std::ostream& out) {
  out << "tau,mean_hits,stderr_hits,mean_messages,stderr_messages\n";
  char buf[160];
  for (const auto& p : curve) {
    std::snprintf(buf, sizeof buf, "%u,%.10g,%.10g,%.10g,%.10g\n", p.tau, p.mean_hits, p.stderr_hits,
                  p.mean_messages, p.stderr_messages);
    out << buf;
  }
}

}  // namespace p2pnet
