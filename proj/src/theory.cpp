#include "prtail/theory.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <ostream>
#include <sstream>

#include "prtail/errors.hpp"
#include "prtail/parallel.hpp"

namespace prtail {

double FactorPrediction::log10_y() const { return std::log10(y); }

FactorPrediction factor(double c, double d, double alpha) {
  if (!(c > 0.0 && c < 1.0)) throw ParameterError("damping factor c must lie in (0, 1)");
  if (!(d > 1.0) || !std::isfinite(d)) throw ParameterError("out-degree d must exceed 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be positive");
  const double c_pow = std::pow(c, alpha);
  const double denominator = std::pow(d, alpha) - c_pow * d;
  if (!(denominator > 0.0)) throw ParameterError("d^alpha - c^alpha d must be positive");
  return FactorPrediction{c, d, alpha, c_pow / denominator};
}

double predicted_ccdf_ratio(const ModelParams& params) {
  return factor(params.c, params.d, params.alpha).y;
}

void write_factor_table(std::ostream& out, std::span<const double> c_grid, double d, double alpha) {
  out.precision(12);
  out << "c,y,log10_y\n";
  for (double c : c_grid) {
    const auto f = factor(c, d, alpha);
    out << c << ',' << f.y << ',' << f.log10_y() << '\n';
  }
}

ExponentialLst::ExponentialLst(double mean) : mean_(mean) {
  if (!(mean > 0.0)) throw ParameterError("exponential mean must be positive");
}

double ExponentialLst::complement(double s) const { return mean_ * s / (1.0 + mean_ * s); }

std::string ExponentialLst::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "exponential mean=" << mean_;
  return os.str();
}

TailSpecLst::TailSpecLst(const TailSpec& spec) : spec_(spec) { spec_.validate(); }

double TailSpecLst::expansion_order() const { return std::min(spec_.alpha, 2.0); }

std::string TailSpecLst::describe() const { return "interval " + spec_.describe(); }

double TailSpecLst::complement(double s) const {
  if (!(s > 0.0)) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  const double x = s * spec_.x_scale;
  const double alpha = spec_.alpha;
  const bool log_corrected = spec_.slowly_varying == SlowlyVarying::logarithmic;

  // With t = m e^v the part above the scale is x * int_0^inf exp(-x e^v) e^v P(T > m e^v) dv.
  auto integrand = [&](double v) {
    const double w = std::exp(-x * std::exp(v) + (1.0 - alpha) * v);
    return log_corrected ? w * (1.0 + v) : w;
  };
  const double knee = std::max(0.0, -std::log(x));
  constexpr unsigned depth = 12;
  constexpr double tol = 1e-13;
  double body = 0.0;
  if (knee > 0.0) body = gauss_kronrod<double, 31>::integrate(integrand, 0.0, knee, depth, tol);
  const double decay = gauss_kronrod<double, 31>::integrate(integrand, knee, knee + 8.0, depth, tol);
  return -std::expm1(-x) + x * (body + decay);
}

LstGrid::LstGrid(std::vector<double> s_points, std::vector<double> complement, double kappa,
                 std::size_t sweeps, double last_change, bool converged)
    : s_(std::move(s_points)),
      q_(std::move(complement)),
      kappa_(kappa),
      sweeps_(sweeps),
      last_change_(last_change),
      converged_(converged) {
  if (s_.size() < 16 || s_.size() != q_.size()) throw ParameterError("LST grid too small");
  log_s_.resize(s_.size());
  std::transform(s_.begin(), s_.end(), log_s_.begin(), [](double s) { return std::log(s); });
  // Second anchor one decade above the bottom of the grid.
  const double step = (log_s_.back() - log_s_.front()) / static_cast<double>(s_.size() - 1);
  anchor_ = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(std::log(10.0) / step)), 1,
                                    s_.size() - 1);
  refit_expansion();
}

void LstGrid::refit_expansion() {
  log_q_.resize(q_.size());
  std::transform(q_.begin(), q_.end(), log_q_.begin(), [](double q) { return std::log(q); });
  // 1 - r(s) = b s - K s^kappa through the two anchors.
  const double s0 = s_[0], s1 = s_[anchor_];
  const double u0 = q_[0] / s0, u1 = q_[anchor_] / s1;
  const double p0 = std::pow(s0, kappa_ - 1.0), p1 = std::pow(s1, kappa_ - 1.0);
  curvature_ = (u0 - u1) / (p1 - p0);
  slope_ = u0 + curvature_ * p0;
}

double LstGrid::complement(double s) const {
  if (!(s > 0.0)) return 0.0;
  if (s < s_.front()) return slope_ * s - curvature_ * std::pow(s, kappa_);
  const double step = (log_s_.back() - log_s_.front()) / static_cast<double>(s_.size() - 1);
  const double u = (std::log(s) - log_s_.front()) / step;
  const auto i = std::min(static_cast<std::size_t>(u), s_.size() - 2);
  const double t = u - static_cast<double>(i);
  return std::exp((1.0 - t) * log_q_[i] + t * log_q_[i + 1]);
}

double LstGrid::r(double s) const { return 1.0 - complement(s); }

std::vector<double> LstGrid::r_values() const {
  std::vector<double> r(q_.size());
  std::transform(q_.begin(), q_.end(), r.begin(), [](double q) { return 1.0 - q; });
  return r;
}

ExpansionFit LstGrid::fit_expansion(std::span<const double> powers, double s_hi) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < s_.size(); ++i) {
    if (s_[i] <= s_hi) rows.push_back(i);
  }
  if (powers.empty() || rows.size() < powers.size()) {
    throw ParameterError("not enough grid points for the expansion fit");
  }
  // Relative residuals; columns scaled to O(1) at s_hi.
  Eigen::MatrixXd a(rows.size(), powers.size());
  Eigen::VectorXd b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double s = s_[rows[r]];
    const double q = q_[rows[r]];
    for (std::size_t j = 0; j < powers.size(); ++j) a(r, j) = std::pow(s / s_hi, powers[j]) / q;
    b(r) = 1.0;
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  ExpansionFit fit;
  fit.powers.assign(powers.begin(), powers.end());
  for (std::size_t j = 0; j < powers.size(); ++j) {
    fit.coefficients.push_back(x(j) / std::pow(s_hi, powers[j]));
  }
  return fit;
}

LstGridSpec LstGridSpec::for_order(double kappa) {
  LstGridSpec spec;
  if (kappa < 2.0) {
    const double exponent = std::max(kappa - 1.0, 0.02);
    spec.s_min = std::max(1e-300, std::min(spec.s_min, std::pow(1e-6, 1.0 / exponent)));
  }
  const double decades = std::log10(spec.s_max / spec.s_min);
  spec.points = std::max<std::size_t>(spec.points, static_cast<std::size_t>(std::ceil(64.0 * decades)));
  return spec;
}

LstGrid solve_lst(const ModelParams& params, const LaplaceTransform& f) {
  return solve_lst(params, f, LstGridSpec::for_order(f.expansion_order()));
}

LstGrid solve_lst(const ModelParams& params, const LaplaceTransform& f, const LstGridSpec& spec) {
  if (!(params.c > 0.0 && params.c < 1.0)) throw ParameterError("damping factor c must lie in (0, 1)");
  if (!(params.d > 0.0) || !(params.c / params.d < 1.0)) {
    throw ParameterError("the transform equation needs c/d < 1");
  }
  if (!(spec.s_min > 0.0 && spec.s_max > spec.s_min) || spec.points < 16) {
    throw ParameterError("invalid LST grid");
  }
  const double ratio = params.c / params.d;
  const double leak = 1.0 - params.c;
  const std::size_t n = spec.points;
  std::vector<double> s(n);
  const double log_lo = std::log(spec.s_min);
  const double step = (std::log(spec.s_max) - log_lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) s[i] = std::exp(log_lo + step * static_cast<double>(i));
  s.back() = spec.s_max;

  std::vector<double> q(n);
  if (!(spec.start_rate > 0.0)) throw ParameterError("start rate must be positive");
  std::transform(s.begin(), s.end(), q.begin(),
                 [&](double v) { return -std::expm1(-spec.start_rate * v); });
  LstGrid grid(s, q, f.expansion_order(), 0, 0.0, false);

  std::vector<double> next(n);
  const std::size_t chunk = 64;
  for (std::size_t sweep = 1; sweep <= spec.max_sweeps; ++sweep) {
    parallel_for((n + chunk - 1) / chunk, [&](std::size_t block) {
      for (std::size_t i = block * chunk; i < std::min(n, (block + 1) * chunk); ++i) {
        const double g = std::exp(-s[i] * leak);
        const double t = grid.complement(ratio * s[i]);
        next[i] = -std::expm1(-s[i] * leak) + f.complement(t) * g;
      }
    });
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(next[i] - grid.q_[i]));
    grid.q_.swap(next);
    grid.refit_expansion();
    grid.sweeps_ = sweep;
    grid.last_change_ = change;
    if (change <= spec.tol) {
      grid.converged_ = true;
      return grid;
    }
  }
  throw NumericError("LST fixed point did not converge within " +
                     std::to_string(spec.max_sweeps) + " sweeps");
}

}  // namespace prtail
