#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <chrono>
#include <cmath>
#include <sstream>

#include "prtail/errors.hpp"
#include "prtail/theory.hpp"

using namespace prtail;

namespace {

// E exp(-s T) for Pareto(alpha, m), 1 < alpha < 2, through the upper incomplete
// gamma function: alpha x^alpha Gamma(-alpha, x) with x = m s, raised twice by
// Gamma(a, x) = (Gamma(a + 1, x) - x^a e^-x) / a to a positive order.
double pareto_lst(double alpha, double m, double s) {
  const double x = m * s;
  return std::exp(-x) * (1.0 + x / (1.0 - alpha)) -
         std::pow(x, alpha) * boost::math::tgamma(2.0 - alpha, x) / (1.0 - alpha);
}

// E exp(-s T) for the log-corrected law by integrating against its density.
double log_corrected_lst(double alpha, double m, double s) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto density = [&](double z) {
    // t = m e^z, P(T > t) = e^{-alpha z} (1 + z); density in z.
    return std::exp(-s * m * std::exp(z) - alpha * z) * (alpha * (1.0 + z) - 1.0);
  };
  return integrator.integrate(density, 0.0, std::numeric_limits<double>::infinity());
}

double eta2_exponential(double c, double d) {
  const double mu2 = 2.0 * d * d;
  return (mu2 * c * c / (d * d) + 2.0 * c * (1.0 - c) + (1.0 - c) * (1.0 - c)) / (1.0 - c * c / d);
}

}  // namespace

TEST_CASE("factor values") {
  using big = boost::multiprecision::cpp_bin_float_50;
  const auto f = factor(0.5, 8.2, 1.1);
  const big c("0.5"), d("8.2"), a("1.1");
  const big ref = pow(c, a) / (pow(d, a) - pow(c, a) * d);
  CHECK(f.y == doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
  CHECK(f.y == doctest::Approx(0.0741).epsilon(1e-3));
  CHECK(f.log10_y() == doctest::Approx(-1.13).epsilon(2e-3));
  CHECK(factor(0.1, 8.2, 1.1).log10_y() == doctest::Approx(-2.077).epsilon(1e-3));
  CHECK(factor(0.9, 8.2, 1.1).log10_y() == doctest::Approx(-0.500).epsilon(2e-3));
  CHECK(factor(1e-12, 8.2, 1.1).y < 1e-13);
  CHECK(factor(0.9, 8.2, 1.1).y > f.y);
  CHECK(factor(0.99, 8.2, 1.1).y < 1.0);
}

TEST_CASE("factor argument checks") {
  CHECK_THROWS_AS(factor(0.0, 8.0, 1.1), ParameterError);
  CHECK_THROWS_AS(factor(1.0, 8.0, 1.1), ParameterError);
  CHECK_THROWS_AS(factor(0.5, 1.0, 1.1), ParameterError);
  CHECK_THROWS_AS(factor(0.5, 8.0, 0.0), ParameterError);
  // d^alpha <= c^alpha d is possible once alpha < 1.
  CHECK_THROWS_AS(factor(0.9, 100.0, 0.01), ParameterError);
}

TEST_CASE("factor is positive, finite and increasing in c over the valid grid") {
  for (double d : {1.01, 2.0, 8.0, 8.2, 50.0}) {
    for (double alpha : {1.01, 1.1, 1.5, 2.5, 4.0}) {
      REQUIRE(std::pow(d, alpha) - d > 0.0);
      double prev = 0.0;
      for (int k = 1; k <= 999; ++k) {
        const double c = k / 1000.0;
        const auto f = factor(c, d, alpha);
        const double denominator = std::pow(d, alpha) - std::pow(c, alpha) * d;
        // Bounded below by d^alpha - d > 0 uniformly in c.
        REQUIRE(denominator > std::pow(d, alpha) - d);
        REQUIRE(std::isfinite(f.y));
        REQUIRE(f.y > prev);
        prev = f.y;
      }
    }
  }
}

TEST_CASE("predicted ratio is the factor") {
  const ModelParams p{0.5, 8.2, 1.1};
  CHECK(predicted_ccdf_ratio(p) == factor(0.5, 8.2, 1.1).y);
}

TEST_CASE("factor table") {
  std::ostringstream out;
  const std::vector<double> grid{0.1, 0.5};
  write_factor_table(out, grid, 8.2, 1.1);
  const auto text = out.str();
  CHECK(text.rfind("c,y,log10_y\n0.1,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("exponential transform") {
  const ExponentialLst f(8.0);
  CHECK(f(0.0) == 1.0);
  CHECK(f(0.5) == doctest::Approx(0.2));
  CHECK(f.complement(1e-12) == doctest::Approx(8e-12).epsilon(1e-10));
  CHECK(f.mean() == 8.0);
  CHECK(f.expansion_order() == 2.0);
  CHECK_THROWS_AS(ExponentialLst(0.0), ParameterError);
}

TEST_CASE("Pareto transform matches the incomplete gamma closed form") {
  for (double alpha : {1.1, 1.5, 1.9}) {
    const auto spec = TailSpec::with_mean(alpha, 8.2);
    const TailSpecLst f(spec);
    CHECK(f.expansion_order() == alpha);
    CHECK(f.mean() == doctest::Approx(8.2));
    for (double s : {1e-3, 1e-2, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0}) {
      CAPTURE(alpha);
      CAPTURE(s);
      const double ref = pareto_lst(alpha, spec.x_scale, s);
      CHECK(std::abs(f(s) - ref) < 1e-12);
      CHECK(f.complement(s) == doctest::Approx(1.0 - ref).epsilon(1e-9));
    }
    // Small s: 1 - f(s) = mean s - alpha Gamma(-alpha) (m s)^alpha + O(s^2).
    const double s = 1e-10;
    const double two_term =
        8.2 * s - alpha * boost::math::tgamma(-alpha) * std::pow(spec.x_scale * s, alpha);
    CHECK(f.complement(s) == doctest::Approx(two_term).epsilon(1e-6));
    CHECK(f.complement(0.0) == 0.0);
  }
}

TEST_CASE("log-corrected transform matches density integration") {
  const auto spec = TailSpec::with_mean(1.5, 8.2, SlowlyVarying::logarithmic);
  const TailSpecLst f(spec);
  for (double s : {1e-3, 0.05, 1.0, 20.0}) {
    CAPTURE(s);
    CHECK(std::abs(f(s) - log_corrected_lst(1.5, spec.x_scale, s)) < 1e-10);
  }
}

TEST_CASE("transform fixed point for exponential T") {
  for (double c : {0.3, 0.85}) {
    const ModelParams p{c, 8.0, 2.0};
    const ExponentialLst f(8.0);
    const auto grid = solve_lst(p, f);
    CHECK(grid.converged());
    CHECK(grid.last_change() <= 1e-12);
    CHECK(grid.r(0.0) == 1.0);
    CHECK(std::abs(grid.derivative_at_zero() - 1.0) < 1e-4);
    const std::vector<double> powers{1, 2, 3, 4};
    const auto fit = grid.fit_expansion(powers, 1e-2);
    const double eta2 = -2.0 * fit.coefficients[1];
    CAPTURE(c);
    CHECK(fit.coefficients[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(eta2 == doctest::Approx(eta2_exponential(c, 8.0)).epsilon(1e-3));
  }
}

TEST_CASE("transform fixed point for Pareto T keeps E R = 1") {
  for (double c : {0.1, 0.5, 0.9}) {
    const ModelParams p{c, 8.2, 1.1};
    const TailSpecLst f(TailSpec::with_mean(1.1, 8.2));
    const auto start = std::chrono::steady_clock::now();
    const auto grid = solve_lst(p, f);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    MESSAGE("c=" << c << " sweeps=" << grid.sweeps() << " seconds=" << secs
                 << " slope=" << grid.derivative_at_zero());
    CAPTURE(c);
    CHECK(std::abs(grid.derivative_at_zero() - 1.0) < 1e-4);
  }
}

TEST_CASE("the mean is recovered from a wrong starting point") {
  for (double c : {0.5, 0.9}) {
    const ModelParams p{c, 8.2, 1.1};
    const TailSpecLst f(TailSpec::with_mean(1.1, 8.2));
    auto spec = LstGridSpec::for_order(f.expansion_order());
    spec.start_rate = 3.0;
    const auto grid = solve_lst(p, f, spec);
    CAPTURE(c);
    CHECK(std::abs(grid.derivative_at_zero() - 1.0) < 1e-4);
  }
}

TEST_CASE("grid helper reaches small s for heavy tails") {
  const auto heavy = LstGridSpec::for_order(1.1);
  CHECK(std::pow(heavy.s_min, 0.1) <= 1.0001e-6);
  CHECK(heavy.points >= 64 * 62);
  const auto light = LstGridSpec::for_order(2.0);
  CHECK(light.s_min == 1e-6);
  CHECK(light.points == 2048);
}

TEST_CASE("solution is a monotone, convex transform") {
  const ModelParams p{0.85, 8.0, 1.5};
  const TailSpecLst f(TailSpec::with_mean(1.5, 8.0));
  const auto grid = solve_lst(p, f, LstGridSpec{1e-6, 1e2, 512});
  const auto& s = grid.s_points();
  const auto r = grid.r_values();
  CHECK(s.size() == 512);
  CHECK(s.front() == doctest::Approx(1e-6));
  CHECK(s.back() == 1e2);
  for (std::size_t i = 0; i < r.size(); ++i) {
    REQUIRE(r[i] > 0.0);
    REQUIRE(r[i] <= 1.0);
    if (i > 0) REQUIRE(r[i] <= r[i - 1]);
    if (i > 1) {
      const double d1 = (r[i - 1] - r[i - 2]) / (s[i - 1] - s[i - 2]);
      const double d2 = (r[i] - r[i - 1]) / (s[i] - s[i - 1]);
      REQUIRE(d2 >= d1 - 1e-9 * std::abs(d1));
    }
  }
  // r(s) -> 1 as s -> 0 and interpolation agrees with the grid.
  CHECK(grid.r(1e-12) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(grid.r(s[100]) == doctest::Approx(r[100]).epsilon(1e-14));
  CHECK(grid.r(std::sqrt(s[100] * s[101])) <= r[100]);
  CHECK(grid.r(std::sqrt(s[100] * s[101])) >= r[101]);
}

TEST_CASE("transform solver errors") {
  const ExponentialLst f(8.0);
  CHECK_THROWS_AS(solve_lst(ModelParams{0.9, 0.5, 1.1}, f), ParameterError);
  CHECK_THROWS_AS(solve_lst(ModelParams{1.0, 8.0, 1.1}, f), ParameterError);
  CHECK_THROWS_AS(solve_lst(ModelParams{0.5, 8.0, 1.1}, f, LstGridSpec{1e-6, 1e2, 8}), ParameterError);
  LstGridSpec tight;
  tight.max_sweeps = 2;
  CHECK_THROWS_AS(solve_lst(ModelParams{0.9, 8.0, 1.1}, f, tight), NumericError);
}
