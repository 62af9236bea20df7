#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "prtail/random.hpp"

namespace prtail {

/// Nonnegative real samples tagged with where they came from.
struct SampleSet {
  std::vector<double> values;
  std::string source;  // "T", "N(T)", "R", "lower_bound", "in_degree", ...
  Seed seed = 0;
  std::string spec;    // free-form description of the generating parameters

  std::size_t size() const noexcept { return values.size(); }
  bool empty() const noexcept { return values.empty(); }
  double mean() const;
};

/// Text export: '#'-prefixed header (source, seed, spec, count), then one value
/// per line with round-trip precision.
void write_samples(std::ostream& out, const SampleSet& samples);

/// Reads the format produced by write_samples. Header lines are optional;
/// unknown comment lines are ignored.
SampleSet read_samples(std::istream& in);

}  // namespace prtail
