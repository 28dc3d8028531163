#include "p2pnet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "p2pnet/errors.hpp"

namespace p2pnet {

double DegreeHistogram::pk(std::size_t k) const {
  if (n_nodes == 0) return 0.0;
  const auto it = counts.find(k);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n_nodes);
}

std::size_t DegreeHistogram::max_degree() const { return counts.empty() ? 0 : counts.rbegin()->first; }

void DegreeHistogram::merge(const DegreeHistogram& other) {
  for (const auto& [k, c] : other.counts) counts[k] += c;
  n_nodes += other.n_nodes;
}

DegreeHistogram degree_histogram(const Graph& g) {
  DegreeHistogram h;
  for (NodeId u = 0; u < g.node_count(); ++u) ++h.counts[g.degree(u)];
  h.n_nodes = g.node_count();
  return h;
}

DegreeHistogram histogram_of(const std::vector<std::size_t>& degrees) {
  DegreeHistogram h;
  for (auto k : degrees) ++h.counts[k];
  h.n_nodes = degrees.size();
  return h;
}

namespace {

long bin_index(std::size_t k, std::size_t per_decade) {
  return static_cast<long>(std::floor(static_cast<double>(per_decade) * std::log10(static_cast<double>(k)) + 1e-9));
}

// Smallest integer degree that lands in bin j.
std::size_t bin_first(long j, std::size_t per_decade) {
  auto c = static_cast<std::size_t>(
      std::max(1.0, std::ceil(std::pow(10.0, static_cast<double>(j) / static_cast<double>(per_decade)))));
  while (c > 1 && bin_index(c - 1, per_decade) >= j) --c;
  while (bin_index(c, per_decade) < j) ++c;
  return c;
}

}  // namespace

std::vector<LogBin> log_bin_histogram(const DegreeHistogram& h, std::size_t bins_per_decade, std::size_t k_lo,
                                      std::size_t k_hi) {
  if (bins_per_decade < 1) throw InputError("bins_per_decade must be >= 1");
  std::vector<LogBin> bins;
  const double n = static_cast<double>(h.n_nodes);
  k_lo = std::max<std::size_t>(k_lo, 1);
  for (auto it = h.counts.lower_bound(k_lo); it != h.counts.end() && it->first <= k_hi;) {
    const long j = bin_index(it->first, bins_per_decade);
    LogBin bin;
    bin.k_first = std::max(bin_first(j, bins_per_decade), k_lo);
    const std::size_t next_first = bin_first(j + 1, bins_per_decade);
    bin.k_last = std::min(next_first - 1, k_hi);
    for (; it != h.counts.end() && it->first <= bin.k_last; ++it) bin.count += it->second;
    if (bin.count == 0) continue;
    bin.width = bin.k_last - bin.k_first + 1;
    bin.k_center = std::sqrt(static_cast<double>(bin.k_first) * static_cast<double>(bin.k_last));
    bin.density = static_cast<double>(bin.count) / (n * static_cast<double>(bin.width));
    bins.push_back(bin);
  }
  return bins;
}

std::vector<LogBin> log_bin_histogram(const DegreeHistogram& h, std::size_t bins_per_decade) {
  return log_bin_histogram(h, bins_per_decade, 1, std::numeric_limits<std::size_t>::max());
}

std::string to_string(FitMethod m) {
  return m == FitMethod::LogBinnedLs ? "log_binned_ls" : "truncated_mle";
}

double ExponentFit::predicted_pk(double k) const { return std::exp(log_prefactor - gamma_hat * std::log(k)); }

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw FitError("least squares needs at least two points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("least squares needs distinct x values");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double sse = std::max(0.0, syy - f.slope * sxy);
  // A perfectly flat response is fit exactly.
  f.r_squared = syy > 1e-300 ? 1.0 - sse / syy : 1.0;
  f.slope_std_error = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
  return f;
}

namespace {

std::size_t distinct_degrees(const DegreeHistogram& h, std::size_t k_lo, std::size_t k_hi) {
  std::size_t d = 0;
  for (auto it = h.counts.lower_bound(std::max<std::size_t>(k_lo, 1)); it != h.counts.end() && it->first <= k_hi;
       ++it) {
    if (it->second > 0) ++d;
  }
  return d;
}

struct LogMoments {
  double mean = 0.0;
  double var = 0.0;
  double log_z = 0.0;
};

// Mean and variance of ln k, and ln Z, under P(k) ~ k^-gamma on [lo, hi].
LogMoments log_moments(double gamma, std::size_t lo, std::size_t hi) {
  double amax = -std::numeric_limits<double>::infinity();
  for (std::size_t k : {lo, hi}) amax = std::max(amax, -gamma * std::log(static_cast<double>(k)));
  double z = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) {
    const double lk = std::log(static_cast<double>(k));
    const double w = std::exp(-gamma * lk - amax);
    z += w;
    s1 += w * lk;
    s2 += w * lk * lk;
  }
  LogMoments m;
  m.mean = s1 / z;
  m.var = std::max(0.0, s2 / z - m.mean * m.mean);
  m.log_z = std::log(z) + amax;
  return m;
}

}  // namespace

ExponentFit fit_powerlaw_exponent(const DegreeHistogram& h, std::size_t k_lo, std::size_t k_hi, FitMethod method,
                                  std::size_t bins_per_decade) {
  k_lo = std::max<std::size_t>(k_lo, 1);
  if (k_hi <= k_lo) throw FitError("empty fit range [" + std::to_string(k_lo) + ", " + std::to_string(k_hi) + "]");
  if (distinct_degrees(h, k_lo, k_hi) < 3) {
    throw FitError("fewer than 3 distinct degrees in [" + std::to_string(k_lo) + ", " + std::to_string(k_hi) + "]");
  }

  ExponentFit fit;
  fit.k_lo = k_lo;
  fit.k_hi = k_hi;
  fit.method = method;
  const auto bins = log_bin_histogram(h, bins_per_decade, k_lo, k_hi);

  if (method == FitMethod::LogBinnedLs) {
    if (bins.size() < 3) throw FitError("fewer than 3 nonempty log bins in fit range");
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& b : bins) {
      x.push_back(std::log(b.k_center));
      y.push_back(std::log(b.density));
    }
    const auto line = least_squares(x, y);
    fit.gamma_hat = -line.slope;
    fit.std_error = line.slope_std_error;
    fit.r_squared = line.r_squared;
    fit.log_prefactor = line.intercept;
    return fit;
  }

  // Discrete power law truncated to [k_lo, k_hi]: the likelihood equation
  // is E_gamma[ln k] = mean of ln k over the samples, and E_gamma[ln k]
  // falls monotonically in gamma.
  double n = 0.0;
  double sum_log = 0.0;
  for (auto it = h.counts.lower_bound(k_lo); it != h.counts.end() && it->first <= k_hi; ++it) {
    n += static_cast<double>(it->second);
    sum_log += static_cast<double>(it->second) * std::log(static_cast<double>(it->first));
  }
  const double target = sum_log / n;
  double lo = -20.0;
  double hi = 20.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (log_moments(mid, k_lo, k_hi).mean > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  fit.gamma_hat = 0.5 * (lo + hi);
  const auto mom = log_moments(fit.gamma_hat, k_lo, k_hi);
  fit.std_error = mom.var > 0.0 ? 1.0 / std::sqrt(n * mom.var) : 0.0;
  fit.log_prefactor = std::log(n / static_cast<double>(h.n_nodes)) - mom.log_z;

  // Goodness of the fitted law against the binned densities.
  double my = 0.0;
  for (const auto& b : bins) my += std::log(b.density);
  my /= static_cast<double>(bins.size());
  double sse = 0.0;
  double sst = 0.0;
  for (const auto& b : bins) {
    const double y = std::log(b.density);
    const double pred = fit.log_prefactor - fit.gamma_hat * std::log(b.k_center);
    sse += (y - pred) * (y - pred);
    sst += (y - my) * (y - my);
  }
  fit.r_squared = sst > 1e-300 ? 1.0 - sse / sst : 1.0;
  return fit;
}

std::pair<std::size_t, std::size_t> default_fit_range(const DegreeHistogram& h, std::size_t m,
                                                      std::optional<std::size_t> cutoff) {
  const std::size_t lo = std::max<std::size_t>(m, 2);
  const std::size_t hi = cutoff ? *cutoff - 1 : h.max_degree() / 3;
  return {lo, hi};
}

std::size_t measure_natural_cutoff(const DegreeHistogram& h) {
  if (h.n_nodes == 0) throw InputError("natural cutoff of an empty histogram");
  return h.max_degree();
}

double natural_cutoff_scaling(std::size_t n, std::size_t m, double gamma) {
  return static_cast<double>(m) * std::pow(static_cast<double>(n), 1.0 / (gamma - 1.0));
}

double single_point_cutoff_scaling(std::size_t n, double gamma) {
  return std::pow(static_cast<double>(n), 1.0 / gamma);
}

SpikeReport cutoff_spike_fraction(const DegreeHistogram& h, std::size_t k_c, const ExponentFit& fit) {
  SpikeReport r;
  r.observed = h.pk(k_c);
  r.extrapolated = fit.predicted_pk(static_cast<double>(k_c));
  r.excess_ratio = r.observed > 0.0 && r.extrapolated > 0.0 ? r.observed / r.extrapolated : 0.0;
  return r;
}

std::string to_string(Shape s) {
  switch (s) {
    case Shape::PowerLaw: return "power_law";
    case Shape::Exponential: return "exponential";
    case Shape::Ambiguous: return "ambiguous";
  }
  return "?";
}

ShapeReport classify_distribution(const DegreeHistogram& h, std::size_t k_lo, std::size_t k_hi,
                                  std::size_t bins_per_decade) {
  if (distinct_degrees(h, k_lo, k_hi) < 5) throw FitError("shape classification needs >= 5 distinct degrees");
  const auto bins = log_bin_histogram(h, bins_per_decade, k_lo, k_hi);
  std::vector<double> log_k;
  std::vector<double> k;
  std::vector<double> log_d;
  for (const auto& b : bins) {
    log_k.push_back(std::log(b.k_center));
    k.push_back(b.k_center);
    log_d.push_back(std::log(b.density));
  }
  ShapeReport r;
  r.r2_power = least_squares(log_k, log_d).r_squared;
  r.r2_exponential = least_squares(k, log_d).r_squared;
  if (r.r2_power >= r.r2_exponential + 0.05) {
    r.shape = Shape::PowerLaw;
  } else if (r.r2_exponential >= r.r2_power + 0.05) {
    r.shape = Shape::Exponential;
  }
  return r;
}

void write_histogram_csv(const DegreeHistogram& h, std::ostream& out) {
  out << "k,count,pk\n";
  char buf[96];
  for (const auto& [k, c] : h.counts) {
    std::snprintf(buf, sizeof buf, "%zu,%llu,%.10g\n", k, static_cast<unsigned long long>(c), h.pk(k));
    out << buf;
  }
}

void write_log_bins_csv(const std::vector<LogBin>& bins, std::ostream& out) {
  out << "k_center,density\n";
  char buf[96];
  for (const auto& b : bins) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", b.k_center, b.density);
    out << buf;
  }
}

}  // namespace p2pnet
