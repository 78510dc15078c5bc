#include "refsde/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "refsde/errors.hpp"

namespace refsde {

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / 1.4142135623730951);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("normal_quantile: p must lie in (0, 1)");
  }
  static const boost::math::normal_distribution<double> dist;
  return boost::math::quantile(dist, p);
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) {
    throw ConfigError("ks_distance: empty sample");
  }
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double c = cdf(sample[i]);
    d = std::max(d, std::abs(c - static_cast<double>(i) / n));
    d = std::max(d, std::abs(c - static_cast<double>(i + 1) / n));
  }
  return d;
}

double ks_distance_to_standard_normal(std::vector<double> sample) {
  return ks_distance(std::move(sample), [](double z) { return normal_cdf(z); });
}

SampleStats sample_stats(const std::vector<double>& values) {
  SampleStats out;
  out.n = static_cast<int>(values.size());
  if (out.n == 0) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / out.n;
  if (out.n >= 2) {
    double ss = 0.0;
    for (double v : values) {
      const double d = v - out.mean;
      ss += d * d;
    }
    out.std_dev = std::sqrt(ss / (out.n - 1));
  }
  return out;
}

}  // namespace refsde
