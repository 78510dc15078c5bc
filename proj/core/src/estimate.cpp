#include "refsde/estimate.hpp"

#include <cmath>
#include <sstream>

#include "refsde/errors.hpp"
#include "refsde/format.hpp"
#include "refsde/stats.hpp"

namespace refsde {

std::string method_name(Method m) { return m == Method::MLE ? "MLE" : "LSE"; }

Method method_from_name(const std::string& name) {
  if (name == "MLE" || name == "mle") return Method::MLE;
  if (name == "LSE" || name == "lse") return Method::LSE;
  throw ConfigError("unknown method \"" + name + "\"; valid: {MLE, LSE}");
}

namespace {

struct ItoSums {
  double numer = 0.0;
  double denom = 0.0;
};

ItoSums ito_sums(const ReflectedPath& path, const DriftSpec& drift,
                 bool reconstruct) {
  const auto n = static_cast<std::size_t>(path.n_steps());
  ItoSums sums;
  ReconstructedRegulators rec;
  if (reconstruct) {
    rec = reconstruct_regulators(path.states, path.config.barriers);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double fx = drift.eval(path.states[i]);
    const double dl = reconstruct ? rec.dL[i] : path.l_cum[i + 1] - path.l_cum[i];
    const double dr = reconstruct ? rec.dR[i] : path.r_cum[i + 1] - path.r_cum[i];
    sums.numer += fx * (path.states[i + 1] - path.states[i] - dl + dr);
    sums.denom += fx * fx * path.config.dt;
  }
  return sums;
}

constexpr double kDegenerateDenom = 1e-12;

void require_informative(double denom) {
  if (!(denom > kDegenerateDenom)) {
    std::ostringstream msg;
    msg << "degenerate path: discretized ∫f^2(X)dt = " << denom
        << " <= 1e-12; the drift carries no information along this trajectory";
    throw NumericalError(msg.str());
  }
}

}  // namespace

EstimateResult estimate(const ReflectedPath& path, const DriftSpec& drift,
                        const EstimateOptions& options) {
  if (path.n_steps() <= 0) {
    throw ConfigError("estimate: path has no steps");
  }
  if (!(options.ci_level > 0.0 && options.ci_level < 1.0)) {
    throw ConfigError("estimate: ci_level must lie in (0, 1)");
  }

  const ItoSums sums = ito_sums(path, drift, options.reconstruct_regulators);
  require_informative(sums.denom);

  EstimateResult out;
  out.method = options.method;
  out.T = path.horizon();
  out.numer = sums.numer;
  out.denom = sums.denom;
  out.theta_hat = sums.numer / sums.denom;
  out.plug_in_F = sums.denom / out.T;
  if (options.sigma.has_value()) {
    out.sigma_used = *options.sigma;
  } else {
    out.sigma_used = std::sqrt(quadratic_variation_sigma2(path));
    out.sigma_from_plugin = true;
  }
  out.std_error = out.sigma_used / std::sqrt(sums.denom);
  out.ci_level = options.ci_level;
  const auto ci = confidence_interval(out.theta_hat, out.sigma_used, out.denom,
                                      options.ci_level);
  out.ci_lo = ci.first;
  out.ci_hi = ci.second;
  out.dt = path.config.dt;
  out.seed = path.config.rng_seed;
  return out;
}

double log_likelihood(const ReflectedPath& path, const DriftSpec& drift, double sigma,
                      double theta) {
  if (!(sigma > 0.0)) {
    throw ConfigError("log_likelihood: sigma must be positive");
  }
  const ItoSums sums = ito_sums(path, drift, false);
  require_informative(sums.denom);
  const double s2 = sigma * sigma;
  return (theta / s2 * sums.numer - theta * theta / (2.0 * s2) * sums.denom) /
         path.horizon();
}

std::pair<double, double> confidence_interval(double theta_hat, double sigma,
                                              double denom, double ci_level) {
  if (!(ci_level > 0.0 && ci_level < 1.0)) {
    throw ConfigError("confidence_interval: ci_level must lie in (0, 1)");
  }
  const double z = normal_quantile(0.5 * (1.0 + ci_level));
  const double half_width = z * sigma / std::sqrt(denom);
  return {theta_hat - half_width, theta_hat + half_width};
}

double quadratic_variation_sigma2(const ReflectedPath& path) {
  const auto n = static_cast<std::size_t>(path.n_steps());
  double qv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dl = path.l_cum[i + 1] - path.l_cum[i];
    const double dr = path.r_cum[i + 1] - path.r_cum[i];
    const double inc = path.states[i + 1] - path.states[i] - dl + dr;
    qv += inc * inc;
  }
  return qv / path.horizon();
}

ReconstructedRegulators reconstruct_regulators(const std::vector<double>& states,
                                               const BarrierConfig& /*barriers*/) {
  if (states.empty()) {
    throw ConfigError("reconstruct_regulators: empty state array");
  }
  const std::size_t n = states.size() - 1;
  ReconstructedRegulators out;
  out.dL.assign(n, 0.0);
  out.dR.assign(n, 0.0);
  // The clamp is not injective: any boundary-ending step is consistent with
  // zero overshoot, and minimality selects exactly that.
  return out;
}

std::string estimate_csv_header() {
  return "method,theta_hat,std_error,ci_lo,ci_hi,T,dt,seed";
}

std::string estimate_csv_row(const EstimateResult& r) {
  std::ostringstream row;
  row << method_name(r.method) << ',' << format_double(r.theta_hat) << ','
      << format_double(r.std_error) << ',' << format_double(r.ci_lo) << ','
      << format_double(r.ci_hi) << ',' << format_double(r.T) << ','
      << format_double(r.dt) << ',' << r.seed;
  return row.str();
}

}  // namespace refsde
