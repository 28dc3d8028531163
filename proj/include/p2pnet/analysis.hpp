#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "p2pnet/graph.hpp"

namespace p2pnet {

struct DegreeHistogram {
  std::map<std::size_t, std::uint64_t> counts;
  std::uint64_t n_nodes = 0;

  double pk(std::size_t k) const;
  std::size_t max_degree() const;
  /// Adds another histogram's counts (pooling realizations).
  void merge(const DegreeHistogram& other);
};

DegreeHistogram degree_histogram(const Graph& g);

/// Builds a histogram straight from a list of degrees.
DegreeHistogram histogram_of(const std::vector<std::size_t>& degrees);

/// One multiplicative bin. Bin j holds the integer degrees k with
/// 10^(j/b) <= k < 10^((j+1)/b); `width` is how many integers that is (after
/// clipping to a fit range) and density = count / (n_nodes * width).
struct LogBin {
  double k_center = 0.0;  // geometric mean of the first and last integer
  double density = 0.0;
  std::size_t k_first = 0;
  std::size_t k_last = 0;
  std::size_t width = 0;
  std::uint64_t count = 0;
};

/// Empty bins and degree 0 are left out.
std::vector<LogBin> log_bin_histogram(const DegreeHistogram& h, std::size_t bins_per_decade = 10);

/// Same, restricted to degrees in [k_lo, k_hi].
std::vector<LogBin> log_bin_histogram(const DegreeHistogram& h, std::size_t bins_per_decade, std::size_t k_lo,
                                      std::size_t k_hi);

enum class FitMethod { LogBinnedLs, TruncatedMle };

std::string to_string(FitMethod m);

struct ExponentFit {
  double gamma_hat = 0.0;
  double std_error = 0.0;
  std::size_t k_lo = 0;
  std::size_t k_hi = 0;
  double r_squared = 0.0;
  FitMethod method = FitMethod::LogBinnedLs;
  /// Fitted P(k) = exp(log_prefactor) * k^(-gamma_hat).
  double log_prefactor = 0.0;

  double predicted_pk(double k) const;
};

/// Throws FitError if fewer than 3 distinct degrees fall in [k_lo, k_hi]
/// (or, for least squares, fewer than 3 nonempty bins).
ExponentFit fit_powerlaw_exponent(const DegreeHistogram& h, std::size_t k_lo, std::size_t k_hi,
                                  FitMethod method = FitMethod::LogBinnedLs, std::size_t bins_per_decade = 10);

/// [max(m, 2), k_c - 1] with a cutoff (the spike is left out), otherwise
/// [max(m, 2), k_max / 3].
std::pair<std::size_t, std::size_t> default_fit_range(const DegreeHistogram& h, std::size_t m,
                                                      std::optional<std::size_t> cutoff);

/// Largest degree present.
std::size_t measure_natural_cutoff(const DegreeHistogram& h);

/// Expected natural cutoff m N^(1/(gamma-1)); m sqrt(N) for gamma = 3.
double natural_cutoff_scaling(std::size_t n, std::size_t m, double gamma);

/// Single-point criterion N P(k_nc) ~ 1 gives k_nc ~ N^(1/gamma). Only
/// reported for comparison.
double single_point_cutoff_scaling(std::size_t n, double gamma);

struct SpikeReport {
  double observed = 0.0;
  double extrapolated = 0.0;
  double excess_ratio = 0.0;
};

/// Compares P(k_c) with the fitted power law extrapolated to k_c.
SpikeReport cutoff_spike_fraction(const DegreeHistogram& h, std::size_t k_c, const ExponentFit& fit);

enum class Shape { PowerLaw, Exponential, Ambiguous };

std::string to_string(Shape s);

struct ShapeReport {
  Shape shape = Shape::Ambiguous;
  double r2_power = 0.0;
  double r2_exponential = 0.0;
};

/// Least squares of log density on log k and on k over the log-binned
/// data in [k_lo, k_hi]; a fit wins when its r^2 is higher by >= 0.05.
/// Needs at least 5 distinct degrees in range.
ShapeReport classify_distribution(const DegreeHistogram& h, std::size_t k_lo, std::size_t k_hi,
                                  std::size_t bins_per_decade = 10);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares; needs >= 2 points with distinct x.
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

/// "k,count,pk"
void write_histogram_csv(const DegreeHistogram& h, std::ostream& out);
/// "k_center,density"
void write_log_bins_csv(const std::vector<LogBin>& bins, std::ostream& out);

}  // namespace p2pnet
