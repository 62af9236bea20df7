#include "prtail/tailstats.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "prtail/errors.hpp"

namespace prtail {

double CcdfTable::at(double x) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), x,
                             [](const CcdfPoint& p, double v) { return p.x < v; });
  return it == points_.end() ? 0.0 : it->p;
}

double CcdfTable::quantile(double q) const {
  if (points_.empty()) throw StateError("quantile of an empty CCDF table");
  // P(X > x_i) is the p of the next point; find the first i with it <= 1 - q.
  const double limit = (1.0 - q) + 1e-12;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    if (points_[i + 1].p <= limit) return points_[i].x;
  }
  return points_.back().x;
}

CcdfTable ccdf(std::span<const double> samples) {
  if (samples.empty()) throw ParameterError("CCDF of an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<CcdfPoint> points;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i] != sorted[i - 1]) {
      points.push_back({sorted[i], static_cast<double>(sorted.size() - i) / n});
    }
  }
  return CcdfTable(std::move(points), sorted.size());
}

TailFit fit_tail_mle(std::span<const double> samples, double x_min) {
  if (!(x_min > 0.0)) throw ParameterError("x_min must be positive");
  std::size_t n_tail = 0;
  std::size_t above = 0;
  double log_sum = 0.0;
  for (double x : samples) {
    if (x < x_min) continue;
    ++n_tail;
    if (x > x_min) {
      ++above;
      log_sum += std::log(x / x_min);
    }
  }
  if (n_tail >= 2 && log_sum == 0.0) {
    throw NumericError("degenerate tail fit: every tail sample equals x_min");
  }
  if (above < 2) throw ParameterError("tail fit needs at least two samples above x_min");
  TailFit fit;
  fit.x_min = x_min;
  fit.n_tail = n_tail;
  fit.alpha_ccdf = static_cast<double>(n_tail) / log_sum;
  fit.std_error = fit.alpha_ccdf / std::sqrt(static_cast<double>(n_tail));
  return fit;
}

double xmin_for_top_fraction(std::span<const double> samples, double fraction) {
  if (samples.size() < 2) throw ParameterError("need at least two samples");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ParameterError("fraction must be in (0, 1]");
  const std::size_t n = samples.size();
  const auto k = std::max<std::size_t>(2, static_cast<std::size_t>(fraction * static_cast<double>(n)));
  std::vector<double> work(samples.begin(), samples.end());
  auto kth = work.begin() + static_cast<std::ptrdiff_t>(n - std::min(k, n));
  std::nth_element(work.begin(), kth, work.end());
  if (*kth > 0.0) return *kth;
  double smallest_positive = 0.0;
  for (double x : samples) {
    if (x > 0.0 && (smallest_positive == 0.0 || x < smallest_positive)) smallest_positive = x;
  }
  if (smallest_positive == 0.0) throw ParameterError("no positive samples to fit");
  return smallest_positive;
}

TailFit fit_top_fraction(std::span<const double> samples, double fraction) {
  return fit_tail_mle(samples, xmin_for_top_fraction(samples, fraction));
}

double log_ccdf_offset_between(const CcdfTable& a, const CcdfTable& b, double x_lo, double x_hi,
                               std::size_t grid_points) {
  if (a.empty() || b.empty()) throw ParameterError("offset of an empty CCDF table");
  if (!(x_lo > 0.0) || !(x_hi >= x_lo)) throw ParameterError("offset band must be positive");
  if (grid_points < 2 || x_hi == x_lo) grid_points = 1;
  const double log_lo = std::log(x_lo);
  const double step = grid_points > 1 ? (std::log(x_hi) - log_lo) / (grid_points - 1) : 0.0;
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x = i + 1 == grid_points && grid_points > 1 ? x_hi : std::exp(log_lo + step * i);
    const double pa = a.at(x);
    const double pb = b.at(x);
    if (pa <= 0.0 || pb <= 0.0) continue;
    sum += std::log10(pa) - std::log10(pb);
    ++used;
  }
  if (used == 0) throw ParameterError("CCDF supports do not overlap inside the band");
  return sum / static_cast<double>(used);
}

double log_ccdf_offset(const CcdfTable& a, const CcdfTable& b, QuantileBand band,
                       std::size_t grid_points) {
  if (a.empty() || b.empty()) throw ParameterError("offset of an empty CCDF table");
  if (!(band.lo > 0.0 && band.lo <= band.hi && band.hi < 1.0)) {
    throw ParameterError("quantile band must satisfy 0 < lo <= hi < 1");
  }
  const CcdfTable& heavier = a.quantile(band.hi) >= b.quantile(band.hi) ? a : b;
  return log_ccdf_offset_between(a, b, heavier.quantile(band.lo), heavier.quantile(band.hi),
                                 grid_points);
}

LineFit loglog_fit(const CcdfTable& table, double x_lo, double x_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  std::size_t n = 0;
  for (const auto& pt : table.points()) {
    if (pt.x < x_lo || pt.x > x_hi || pt.x <= 0.0 || pt.p <= 0.0) continue;
    const double lx = std::log10(pt.x);
    const double ly = std::log10(pt.p);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
    ++n;
  }
  if (n < 2) throw NumericError("log-log fit needs at least two points");
  const double dn = static_cast<double>(n);
  const double vxx = sxx - sx * sx / dn;
  const double vxy = sxy - sx * sy / dn;
  const double vyy = syy - sy * sy / dn;
  if (vxx <= 0.0) throw NumericError("log-log fit over a single abscissa");
  LineFit fit;
  fit.points = n;
  fit.slope = vxy / vxx;
  fit.intercept = (sy - fit.slope * sx) / dn;
  fit.r_squared = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
  return fit;
}

LineFit top_decade_fit(const CcdfTable& table, std::size_t min_count) {
  if (table.empty()) throw ParameterError("fit of an empty CCDF table");
  const double n = static_cast<double>(table.sample_count());
  double x_top = table.min();
  for (const auto& pt : table.points()) {
    if (pt.p * n + 0.5 >= static_cast<double>(min_count)) x_top = pt.x;
  }
  return loglog_fit(table, x_top / 10.0, x_top);
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ParameterError("KS distance of an empty sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

void write_ccdf_csv(std::ostream& out, const CcdfTable& table) {
  out.precision(17);
  out << "x,p\n";
  for (const auto& pt : table.points()) out << pt.x << ',' << pt.p << '\n';
}

void write_ccdf_loglog(std::ostream& out, const CcdfTable& table) {
  out.precision(10);
  out << "# log10(x) log10(P(X>=x)), n=" << table.sample_count() << '\n';
  for (const auto& pt : table.points()) {
    if (pt.x > 0.0) out << std::log10(pt.x) << ' ' << std::log10(pt.p) << '\n';
  }
}

void write_tail_fit(std::ostream& out, const TailFit& fit, const std::string& label) {
  out.precision(10);
  out << "[" << label << "]\n"
      << "x_min: " << fit.x_min << '\n'
      << "alpha_ccdf: " << fit.alpha_ccdf << '\n'
      << "density_exponent: " << fit.density_exponent() << '\n'
      << "n_tail: " << fit.n_tail << '\n'
      << "stderr: " << fit.std_error << '\n';
}

}  // namespace prtail
