#pragma once

#include <functional>
#include <vector>

namespace refsde {

double normal_cdf(double z);
double normal_quantile(double p);  // p in (0,1)

/// Kolmogorov distance sup_x |F_emp(x) - cdf(x)| of a sample against a
/// reference CDF. The sample is copied and sorted internally.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Kolmogorov distance of a sample against the standard normal CDF.
double ks_distance_to_standard_normal(std::vector<double> sample);

struct SampleStats {
  int n = 0;
  double mean = 0.0;
  double std_dev = 0.0;  // (n-1) convention
};

SampleStats sample_stats(const std::vector<double>& values);

}  // namespace refsde
