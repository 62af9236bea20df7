#include "prtail/sample_set.hpp"

#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>

#include "prtail/errors.hpp"

namespace prtail {

double SampleSet::mean() const {
  if (values.empty()) throw StateError("mean of an empty sample set");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

void write_samples(std::ostream& out, const SampleSet& samples) {
  out << "# source: " << samples.source << '\n'
      << "# seed: " << samples.seed << '\n'
      << "# spec: " << samples.spec << '\n'
      << "# count: " << samples.values.size() << '\n';
  char buf[32];
  for (double v : samples.values) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, end - buf);
    out.put('\n');
  }
}

namespace {

std::string header_value(const std::string& line, const std::string& key) {
  const std::string prefix = "# " + key + ": ";
  if (line.rfind(prefix, 0) != 0) return {};
  return line.substr(prefix.size());
}

}  // namespace

SampleSet read_samples(std::istream& in) {
  SampleSet s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (auto v = header_value(line, "source"); !v.empty()) s.source = v;
      if (auto v = header_value(line, "spec"); !v.empty()) s.spec = v;
      if (auto v = header_value(line, "seed"); !v.empty()) s.seed = std::stoull(v);
      continue;
    }
    double x = 0.0;
    const char* first = line.data();
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc{} || ptr != last) throw ParseError(lineno, "not a number: '" + line + "'");
    s.values.push_back(x);
  }
  return s;
}

}  // namespace prtail
