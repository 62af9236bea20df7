#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "prtail/fixedpoint.hpp"
#include "prtail/rvmodel.hpp"

namespace prtail {

/// Asymptotic ratio y = c^alpha / (d^alpha - c^alpha d) between the PageRank
/// and in-degree tails.
struct FactorPrediction {
  double c = 0.0;
  double d = 0.0;
  double alpha = 0.0;
  double y = 0.0;

  double log10_y() const;
};

/// Throws ParameterError outside 0 < c < 1, d > 1, alpha > 0, or when the
/// denominator is not positive.
FactorPrediction factor(double c, double d, double alpha);

/// y(c) for the model's parameters: the limit of P(R > x) / P(N(T) > x).
double predicted_ccdf_ratio(const ModelParams& params);

/// CSV "c,y,log10_y" over a grid of damping factors.
void write_factor_table(std::ostream& out, std::span<const double> c_grid, double d, double alpha);

/// Laplace-Stieltjes transform f(s) = E exp(-s X) of a nonnegative variable.
class LaplaceTransform {
 public:
  virtual ~LaplaceTransform() = default;

  /// 1 - f(s), evaluated without cancellation for small s.
  virtual double complement(double s) const = 0;
  virtual double mean() const = 0;
  /// Order kappa of the leading correction in 1 - f(s) = mean * s - K s^kappa + ...
  /// (2 with a finite variance, the tail index when it lies in (1, 2)).
  virtual double expansion_order() const = 0;
  virtual std::string describe() const = 0;

  double operator()(double s) const { return 1.0 - complement(s); }
};

/// Exponential law with the given mean: f(s) = 1 / (1 + mean * s).
class ExponentialLst final : public LaplaceTransform {
 public:
  explicit ExponentialLst(double mean);
  double complement(double s) const override;
  double mean() const override { return mean_; }
  double expansion_order() const override { return 2.0; }
  std::string describe() const override;

 private:
  double mean_;
};

/// Transform of a TailSpec interval by adaptive Gauss-Kronrod quadrature of
///   1 - f(s) = s * integral_0^inf exp(-s t) P(T > t) dt,
/// split at the scale m and at t = 1/s.
class TailSpecLst final : public LaplaceTransform {
 public:
  explicit TailSpecLst(const TailSpec& spec);
  double complement(double s) const override;
  double mean() const override { return spec_.mean(); }
  double expansion_order() const override;
  std::string describe() const override;

 private:
  TailSpec spec_;
};

struct LstGridSpec {
  double s_min = 1e-6;
  double s_max = 1e2;
  std::size_t points = 2048;
  double tol = 1e-12;  // sup-norm change between sweeps
  std::size_t max_sweeps = 100'000;
  double start_rate = 1.0;  // sweeps start from r == exp(-start_rate s)

  /// Grid whose bottom reaches s^(kappa - 1) <= 1e-6, so the expansion
  /// b s - K s^kappa is accurate there even for kappa close to 1. At least
  /// 2048 points and 64 per decade.
  static LstGridSpec for_order(double kappa);
};

/// Coefficients of 1 - r(s) = sum_i coef_i * s^power_i fitted near s = 0.
struct ExpansionFit {
  std::vector<double> powers;
  std::vector<double> coefficients;
};

/// Transform r(s) = E exp(-s R) of the PageRank variable, tabulated on a
/// log-spaced grid.
class LstGrid {
 public:
  LstGrid(std::vector<double> s_points, std::vector<double> complement, double kappa,
          std::size_t sweeps, double last_change, bool converged);

  const std::vector<double>& s_points() const noexcept { return s_; }
  /// r at the grid points.
  std::vector<double> r_values() const;
  /// 1 - r at the grid points.
  const std::vector<double>& complement_values() const noexcept { return q_; }

  /// r(s) for any s >= 0: log-log interpolation of 1 - r between grid points,
  /// the two-term expansion below the grid.
  double r(double s) const;
  double complement(double s) const;

  /// -r'(0+), from the two-term expansion b s - K s^kappa fitted at the
  /// bottom of the grid.
  double derivative_at_zero() const noexcept { return slope_; }

  /// Least-squares fit of 1 - r(s) on the grid points with s <= s_hi.
  ExpansionFit fit_expansion(std::span<const double> powers, double s_hi) const;

  std::size_t sweeps() const noexcept { return sweeps_; }
  double last_change() const noexcept { return last_change_; }
  bool converged() const noexcept { return converged_; }

 private:
  void refit_expansion();

  std::vector<double> s_;
  std::vector<double> q_;
  std::vector<double> log_s_;
  std::vector<double> log_q_;
  double kappa_;
  std::size_t anchor_;
  double slope_ = 1.0;
  double curvature_ = 0.0;
  std::size_t sweeps_;
  double last_change_;
  bool converged_;

  friend LstGrid solve_lst(const ModelParams&, const LaplaceTransform&, const LstGridSpec&);
};

/// Fixed point of r(s) = f(1 - r((c/d) s)) exp(-s (1 - c)) on the grid, by
/// repeated sweeps from r == exp(-spec.start_rate s). Requires c/d < 1. Throws NumericError if
/// the sup-norm change is still above spec.tol after max_sweeps.
LstGrid solve_lst(const ModelParams& params, const LaplaceTransform& f, const LstGridSpec& spec);

/// Same, on LstGridSpec::for_order(f.expansion_order()).
LstGrid solve_lst(const ModelParams& params, const LaplaceTransform& f);

}  // namespace prtail
