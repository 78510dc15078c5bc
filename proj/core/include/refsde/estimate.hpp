#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "refsde/drift.hpp"
#include "refsde/simulate.hpp"

namespace refsde {

enum class Method { MLE, LSE };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct EstimateResult {
  double theta_hat = 0.0;
  Method method = Method::MLE;
  double T = 0.0;
  double denom = 0.0;      // discretized ∫ f^2(X) dt
  double numer = 0.0;      // discretized ∫ f(X)(dX - dL + dR)
  double plug_in_F = 0.0;  // denom / T
  double std_error = 0.0;  // sigma / sqrt(denom)
  double ci_level = 0.95;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double sigma_used = 0.0;
  bool sigma_from_plugin = false;
  // provenance, carried into the result CSV row
  double dt = 0.0;
  std::uint64_t seed = 0;
};

struct EstimateOptions {
  Method method = Method::MLE;
  double ci_level = 0.95;
  /// Known diffusion coefficient. When absent the quadratic-variation
  /// plug-in estimate is used and the result is marked accordingly.
  std::optional<double> sigma;
  /// Take regulator increments from the path (default) or rebuild them from
  /// the states alone (see reconstruct_regulators).
  bool reconstruct_regulators = false;
};

/// Closed-form drift estimator
///
///   theta_hat = Σ f(X_i)(X_{i+1} - X_i - dL_i + dR_i) / Σ f^2(X_i) dt
///
/// with left-endpoint (Ito) sums. MLE and LSE share this form; the method
/// only labels the result. Regulator increments are taken as adjacent
/// differences of the cumulative columns so an estimate recomputed from a
/// saved CSV is bitwise identical to the in-memory one.
/// Throws NumericalError when the denominator falls below 1e-12.
EstimateResult estimate(const ReflectedPath& path, const DriftSpec& drift,
                        const EstimateOptions& options = {});

/// Normalized log-likelihood
///
///   l_T(theta) = (1/T) [ (theta/sigma^2) Σ f(X_i)(dX_i - dL_i + dR_i)
///                        - (theta^2 / 2 sigma^2) Σ f^2(X_i) dt ],
///
/// quadratic in theta, zero at theta = 0, maximized at the estimate above.
double log_likelihood(const ReflectedPath& path, const DriftSpec& drift, double sigma,
                      double theta);

/// theta_hat ± z_{(1+level)/2} * sigma / sqrt(denom); recomputed from the
/// result fields. Throws ConfigError for level outside (0, 1).
std::pair<double, double> confidence_interval(double theta_hat, double sigma,
                                              double denom, double ci_level);

/// Quadratic-variation plug-in sigma^2 = Σ (dX_i - dL_i + dR_i)^2 / T.
double quadratic_variation_sigma2(const ReflectedPath& path);

/// Observed-data regulator reconstruction: the minimal increments consistent
/// with the states alone. The per-step clamp discards the overshoot
/// magnitude, so a boundary-ending step admits any dL >= 0 and minimality
/// selects zero; interior-ending steps provably carried no regulation. The
/// result therefore matches simulator increments exactly on every step that
/// ends in the interior, and under-counts regulator mass on boundary steps.
struct ReconstructedRegulators {
  std::vector<double> dL;
  std::vector<double> dR;
};
ReconstructedRegulators reconstruct_regulators(const std::vector<double>& states,
                                               const BarrierConfig& barriers);

/// CSV row per the result schema:
/// method,theta_hat,std_error,ci_lo,ci_hi,T,dt,seed
std::string estimate_csv_header();
std::string estimate_csv_row(const EstimateResult& result);

}  // namespace refsde
