#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "prtail/random.hpp"
#include "prtail/sample_set.hpp"

namespace prtail {

/// Slowly varying factor L(x) of the interval CCDF.
enum class SlowlyVarying {
  constant,     // P(T > x) = (x/m)^-alpha
  logarithmic,  // P(T > x) = (x/m)^-alpha * (1 + ln(x/m))
};

/// Law of the regularly varying interval T, supported on [x_scale, inf).
struct TailSpec {
  double alpha = 1.5;
  double x_scale = 1.0;
  SlowlyVarying slowly_varying = SlowlyVarying::constant;

  /// Spec whose scale is calibrated so that E T = mean.
  static TailSpec with_mean(double alpha, double mean,
                            SlowlyVarying sv = SlowlyVarying::constant);

  /// Throws ParameterError unless alpha > 1 and x_scale > 0.
  void validate() const;

  /// P(T > x).
  double ccdf(double x) const;
  /// The x with P(T > x) = u, for u in (0, 1].
  double inverse_ccdf(double u) const;
  double mean() const;
  std::string describe() const;
};

/// Scale m with E T = d for a pure Pareto(alpha, m): m = d (alpha - 1) / alpha.
double pareto_scale_for_mean(double alpha, double d);

/// Same calibration for either slowly varying family.
double scale_for_mean(double alpha, double d, SlowlyVarying sv);

/// In-degree law N(T): Poisson counts (rate 1) over a random interval T.
///
/// Besides the regularly varying mixture this also represents the degenerate
/// laws used to probe the fixed-point equation: T == t (plain Poisson) and a
/// constant in-degree.
class InDegreeModel {
 public:
  enum class Kind { mixed, poisson, constant };

  static InDegreeModel mixed(const TailSpec& tail);
  static InDegreeModel poisson(double t);
  static InDegreeModel constant(std::uint64_t k);

  Kind kind() const noexcept { return kind_; }
  /// Interval law; only meaningful for Kind::mixed.
  const TailSpec& tail() const noexcept { return tail_; }
  /// Rate of the Poisson process, fixed at 1.
  static constexpr double poisson_rate = 1.0;

  double mean() const;
  std::string describe() const;

 private:
  InDegreeModel() = default;

  Kind kind_ = Kind::mixed;
  TailSpec tail_{};
  double level_ = 0.0;  // t for Kind::poisson, k for Kind::constant
};

/// n i.i.d. draws of T. Deterministic in (spec, n, seed) and independent of
/// the number of worker threads.
SampleSet sample_t(const TailSpec& spec, std::size_t n, Seed seed);

/// n i.i.d. draws of N(T). For a mixed model the underlying intervals are
/// exactly the draws sample_t(model.tail(), n, seed) would return, so the two
/// sample sets are coupled draw by draw when called with the same seed.
SampleSet sample_in_degree(const InDegreeModel& model, std::size_t n, Seed seed);

}  // namespace prtail
