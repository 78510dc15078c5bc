#pragma once

#include <functional>
#include <string>
#include <vector>

namespace refsde {

/// Closed interval [lo, hi]; hi may be +infinity.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool bounded() const;
  double width() const { return hi - lo; }
};

/// A named drift function f together with the metadata needed by the
/// simulator, the estimators and the stationary-density quadrature.
///
/// `antiderivative`, when present, is a primitive P with P(x) = ∫_0^x f(y)dy;
/// integrals from an arbitrary lower endpoint are taken as differences of P.
/// Without it, `integral` falls back to adaptive quadrature.
struct DriftSpec {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> antiderivative;  // empty when not available
  double lipschitz_bound = 0.0;
  Interval domain_hint{0.0, 0.0};

  bool has_antiderivative() const { return static_cast<bool>(antiderivative); }

  /// ∫_a^b f(y) dy, closed form when the primitive is present, otherwise
  /// adaptive quadrature with relative tolerance 1e-10.
  double integral(double a, double b) const;
};

/// Closed parameter interval [theta_center - radius, theta_center + radius].
struct ParameterSpace {
  double theta_center = 0.0;
  double radius = 0.0;

  ParameterSpace(double center, double r);
  double lower() const { return theta_center - radius; }
  double upper() const { return theta_center + radius; }
  bool contains(double theta) const;
};

/// Names accepted by builtin_drift and in config files.
const std::vector<std::string>& builtin_drift_names();

/// Look up a builtin drift: "sin2pi" (sin(2πx)), "sqrt" (√x), or
/// "linear" (-x, a reflected Ornstein-Uhlenbeck cross-check model).
/// Unknown names raise ConfigError listing the valid set.
///
/// Note on "sqrt": √x is not Lipschitz at 0. The stored bound 1/(2√ε),
/// ε = 1e-6, is valid on [ε, ∞) only; at a lower barrier l = 0 the grid
/// check will fail once the grid resolves scales below ε. Simulation and
/// estimation proceed regardless.
DriftSpec builtin_drift(const std::string& name);

/// Grid check of |f(x1)-f(x2)| <= M|x1-x2| over adjacent pairs of a uniform
/// grid on `domain`. True iff every difference quotient is <= M(1 + 1e-9).
/// The domain must be bounded.
bool validate_lipschitz(const DriftSpec& spec, Interval domain, int grid_points);

/// Largest adjacent-pair difference quotient on a uniform grid (the quantity
/// validate_lipschitz compares against the stored bound).
double max_difference_quotient(const DriftSpec& spec, Interval domain, int grid_points);

/// max |f| over a uniform grid; used for the non-triviality check.
double max_abs_on_grid(const DriftSpec& spec, Interval domain, int grid_points);

/// sup-norm mismatch between the central finite difference of the stored
/// antiderivative and f itself, over a uniform grid of interior points.
double antiderivative_mismatch(const DriftSpec& spec, Interval domain, int grid_points);

}  // namespace refsde
