#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "prtail/sample_set.hpp"

namespace prtail {

struct CcdfPoint {
  double x;
  double p;  // fraction of samples >= x
};

/// Empirical complementary CDF P(X >= x) evaluated at every distinct sample.
class CcdfTable {
 public:
  CcdfTable() = default;
  CcdfTable(std::vector<CcdfPoint> points, std::size_t sample_count)
      : points_(std::move(points)), sample_count_(sample_count) {}

  const std::vector<CcdfPoint>& points() const noexcept { return points_; }
  std::size_t sample_count() const noexcept { return sample_count_; }
  bool empty() const noexcept { return points_.empty(); }
  double min() const { return points_.front().x; }
  double max() const { return points_.back().x; }

  /// Empirical P(X >= x) at an arbitrary x; 0 beyond the largest sample.
  double at(double x) const;

  /// Smallest sample value v with P(X <= v) >= q.
  double quantile(double q) const;

 private:
  std::vector<CcdfPoint> points_;
  std::size_t sample_count_ = 0;
};

CcdfTable ccdf(std::span<const double> samples);
inline CcdfTable ccdf(const SampleSet& s) { return ccdf(std::span<const double>(s.values)); }

/// Maximum-likelihood (Hill) estimate of the CCDF index above a threshold.
struct TailFit {
  double x_min = 0.0;
  double alpha_ccdf = 0.0;  // n_tail / sum ln(x_i / x_min)
  std::size_t n_tail = 0;   // samples >= x_min
  double std_error = 0.0;   // alpha_ccdf / sqrt(n_tail)

  /// Exponent of the density (histogram), one more than the CCDF index.
  double density_exponent() const noexcept { return alpha_ccdf + 1.0; }
};

/// Samples equal to x_min count toward n_tail but add nothing to the log-sum.
/// Throws ParameterError if fewer than two samples exceed x_min and
/// NumericError if the log-sum vanishes.
TailFit fit_tail_mle(std::span<const double> samples, double x_min);

/// Threshold keeping the top `fraction` of the samples: the k-th largest value
/// with k = max(2, floor(fraction * n)). When that order statistic is not
/// positive the smallest positive sample is used instead.
double xmin_for_top_fraction(std::span<const double> samples, double fraction);

TailFit fit_top_fraction(std::span<const double> samples, double fraction);

struct QuantileBand {
  double lo = 0.99;
  double hi = 0.9999;
};

/// Mean of log10 P_a(X >= x) - log10 P_b(X >= x) over a log-spaced grid of x
/// spanning the band's quantiles of the heavier of the two tables. Grid points
/// outside either table's support are skipped; if none remain a
/// ParameterError is thrown.
double log_ccdf_offset(const CcdfTable& a, const CcdfTable& b, QuantileBand band = {},
                       std::size_t grid_points = 64);

/// Same as log_ccdf_offset over an explicit x range.
double log_ccdf_offset_between(const CcdfTable& a, const CcdfTable& b, double x_lo, double x_hi,
                               std::size_t grid_points = 64);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through (log10 x, log10 p) for table points in [x_lo, x_hi].
LineFit loglog_fit(const CcdfTable& table, double x_lo, double x_hi);

/// loglog_fit over [x_top / 10, x_top], where x_top is the largest x that still
/// has at least `min_count` samples at or above it.
LineFit top_decade_fit(const CcdfTable& table, std::size_t min_count = 100);

/// Two-sample Kolmogorov-Smirnov distance of two ascending-sorted samples.
double ks_distance(std::span<const double> sorted_a, std::span<const double> sorted_b);

void write_ccdf_csv(std::ostream& out, const CcdfTable& table);
/// "log10(x) log10(p)" pairs, whitespace separated, for gnuplot.
void write_ccdf_loglog(std::ostream& out, const CcdfTable& table);
/// key: value block.
void write_tail_fit(std::ostream& out, const TailFit& fit, const std::string& label);

}  // namespace prtail
