#include "prtail/rvmodel.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <sstream>

#include "prtail/errors.hpp"
#include "prtail/parallel.hpp"

namespace prtail {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw ParameterError("tail index alpha must exceed 1 (finite mean), got " +
                         std::to_string(alpha));
  }
}

// Solves (1 + z) e^{-alpha z} = u for z = ln(x/m) >= 0.
double log_corrected_inverse(double alpha, double u) {
  if (u >= 1.0) return 0.0;
  const double log_u = std::log(u);
  auto f = [&](double z) {
    return std::make_pair(-alpha * z + std::log1p(z) - log_u, -alpha + 1.0 / (1.0 + z));
  };
  const double hi = -log_u / (alpha - 1.0);
  const double guess = -log_u / alpha;
  std::uintmax_t iters = 200;
  return boost::math::tools::newton_raphson_iterate(f, guess, 0.0, hi, 48, iters);
}

}  // namespace

double pareto_scale_for_mean(double alpha, double d) {
  require_alpha(alpha);
  if (!(d > 0.0)) throw ParameterError("mean must be positive");
  return d * (alpha - 1.0) / alpha;
}

double scale_for_mean(double alpha, double d, SlowlyVarying sv) {
  if (sv == SlowlyVarying::constant) return pareto_scale_for_mean(alpha, d);
  require_alpha(alpha);
  if (!(d > 0.0)) throw ParameterError("mean must be positive");
  const double a1 = alpha - 1.0;
  return d / (1.0 + 1.0 / a1 + 1.0 / (a1 * a1));
}

TailSpec TailSpec::with_mean(double alpha, double mean, SlowlyVarying sv) {
  return TailSpec{alpha, scale_for_mean(alpha, mean, sv), sv};
}

void TailSpec::validate() const {
  require_alpha(alpha);
  if (!(x_scale > 0.0) || !std::isfinite(x_scale)) {
    throw ParameterError("tail scale must be positive");
  }
}

double TailSpec::ccdf(double x) const {
  if (x < x_scale) return 1.0;
  const double z = std::log(x / x_scale);
  const double base = std::exp(-alpha * z);
  return slowly_varying == SlowlyVarying::constant ? base : base * (1.0 + z);
}

double TailSpec::inverse_ccdf(double u) const {
  if (slowly_varying == SlowlyVarying::constant) return x_scale * std::pow(u, -1.0 / alpha);
  return x_scale * std::exp(log_corrected_inverse(alpha, u));
}

double TailSpec::mean() const {
  const double a1 = alpha - 1.0;
  if (slowly_varying == SlowlyVarying::constant) return x_scale * alpha / a1;
  return x_scale * (1.0 + 1.0 / a1 + 1.0 / (a1 * a1));
}

std::string TailSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "alpha=" << alpha << " x_scale=" << x_scale << " L="
     << (slowly_varying == SlowlyVarying::constant ? "constant" : "logarithmic");
  return os.str();
}

InDegreeModel InDegreeModel::mixed(const TailSpec& tail) {
  tail.validate();
  InDegreeModel m;
  m.kind_ = Kind::mixed;
  m.tail_ = tail;
  return m;
}

InDegreeModel InDegreeModel::poisson(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("Poisson interval must be >= 0");
  InDegreeModel m;
  m.kind_ = Kind::poisson;
  m.level_ = t;
  return m;
}

InDegreeModel InDegreeModel::constant(std::uint64_t k) {
  InDegreeModel m;
  m.kind_ = Kind::constant;
  m.level_ = static_cast<double>(k);
  return m;
}

double InDegreeModel::mean() const {
  return kind_ == Kind::mixed ? tail_.mean() * poisson_rate : level_;
}

std::string InDegreeModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::mixed: os << "N(T) with " << tail_.describe(); break;
    case Kind::poisson: os << "Poisson(" << level_ << ")"; break;
    case Kind::constant: os << "constant " << level_; break;
  }
  return os.str();
}

SampleSet sample_t(const TailSpec& spec, std::size_t n, Seed seed) {
  spec.validate();
  if (n == 0) throw ParameterError("sample count must be at least 1");
  SampleSet out;
  out.source = "T";
  out.seed = seed;
  out.spec = spec.describe();
  out.values.resize(n);
  parallel_for(chunk_count(n), [&](std::size_t chunk) {
    Rng rng(derive_seed(seed, Stream::interval, chunk));
    const std::size_t end = std::min(n, (chunk + 1) * kChunkSize);
    for (std::size_t i = chunk * kChunkSize; i < end; ++i) {
      out.values[i] = spec.inverse_ccdf(rng.uniform());
    }
  });
  return out;
}

SampleSet sample_in_degree(const InDegreeModel& model, std::size_t n, Seed seed) {
  if (n == 0) throw ParameterError("sample count must be at least 1");
  SampleSet out;
  out.source = "N(T)";
  out.seed = seed;
  out.spec = model.describe();
  out.values.resize(n);
  if (model.kind() == InDegreeModel::Kind::constant) {
    std::fill(out.values.begin(), out.values.end(), model.mean());
    return out;
  }
  const TailSpec& tail = model.tail();
  const bool mixed = model.kind() == InDegreeModel::Kind::mixed;
  const double fixed_t = model.mean();
  parallel_for(chunk_count(n), [&](std::size_t chunk) {
    Rng interval(derive_seed(seed, Stream::interval, chunk));
    Rng counts(derive_seed(seed, Stream::poisson, chunk));
    const std::size_t end = std::min(n, (chunk + 1) * kChunkSize);
    for (std::size_t i = chunk * kChunkSize; i < end; ++i) {
      const double t = mixed ? tail.inverse_ccdf(interval.uniform()) : fixed_t;
      out.values[i] = static_cast<double>(counts.poisson(t * InDegreeModel::poisson_rate));
    }
  });
  return out;
}

}  // namespace prtail
