#include "refsde/drift.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "refsde/errors.hpp"
#include "refsde/quadrature.hpp"

namespace refsde {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
constexpr double kSqrtEps = 1e-6;  // bound for "sqrt" is valid on [eps, inf)

Interval require_bounded(Interval domain, const char* who) {
  if (!domain.bounded() || !(domain.lo < domain.hi)) {
    std::ostringstream msg;
    msg << who << ": domain must be a bounded interval with lo < hi; "
        << "truncate unbounded domains before calling";
    throw ConfigError(msg.str());
  }
  return domain;
}

}  // namespace

bool Interval::bounded() const {
  return std::isfinite(lo) && std::isfinite(hi);
}

double DriftSpec::integral(double a, double b) const {
  if (has_antiderivative()) {
    return antiderivative(b) - antiderivative(a);
  }
  if (a == b) return 0.0;
  const auto& f = eval;
  return integrate([&f](double x) { return f(x); }, a, b, 1e-10);
}

ParameterSpace::ParameterSpace(double center, double r)
    : theta_center(center), radius(r) {
  if (!(r >= 0.0)) {
    throw ConfigError("ParameterSpace: radius must be nonnegative");
  }
}

bool ParameterSpace::contains(double theta) const {
  return theta >= lower() && theta <= upper();
}

const std::vector<std::string>& builtin_drift_names() {
  static const std::vector<std::string> names = {"sin2pi", "sqrt", "linear"};
  return names;
}

DriftSpec builtin_drift(const std::string& name) {
  const double inf = std::numeric_limits<double>::infinity();
  if (name == "sin2pi") {
    DriftSpec spec;
    spec.name = "sin2pi";
    spec.eval = [](double x) { return std::sin(kTwoPi * x); };
    spec.antiderivative = [](double x) { return (1.0 - std::cos(kTwoPi * x)) / kTwoPi; };
    spec.lipschitz_bound = kTwoPi;
    spec.domain_hint = {-inf, inf};
    return spec;
  }
  if (name == "sqrt") {
    DriftSpec spec;
    spec.name = "sqrt";
    spec.eval = [](double x) { return std::sqrt(x); };
    spec.antiderivative = [](double x) { return (2.0 / 3.0) * x * std::sqrt(x); };
    spec.lipschitz_bound = 0.5 / std::sqrt(kSqrtEps);
    spec.domain_hint = {0.0, inf};
    return spec;
  }
  if (name == "linear") {
    DriftSpec spec;
    spec.name = "linear";
    spec.eval = [](double x) { return -x; };
    spec.antiderivative = [](double x) { return -0.5 * x * x; };
    spec.lipschitz_bound = 1.0;
    spec.domain_hint = {-inf, inf};
    return spec;
  }
  std::ostringstream msg;
  msg << "unknown drift \"" << name << "\"; valid names: {";
  const auto& names = builtin_drift_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    msg << (i ? ", " : "") << names[i];
  }
  msg << "}";
  throw ConfigError(msg.str());
}

double max_difference_quotient(const DriftSpec& spec, Interval domain, int grid_points) {
  require_bounded(domain, "max_difference_quotient");
  if (grid_points < 2) {
    throw ConfigError("max_difference_quotient: need at least 2 grid points");
  }
  const double h = domain.width() / (grid_points - 1);
  double worst = 0.0;
  double prev = spec.eval(domain.lo);
  for (int i = 1; i < grid_points; ++i) {
    const double x = domain.lo + i * h;
    const double cur = spec.eval(x);
    worst = std::max(worst, std::abs(cur - prev) / h);
    prev = cur;
  }
  return worst;
}

bool validate_lipschitz(const DriftSpec& spec, Interval domain, int grid_points) {
  const double worst = max_difference_quotient(spec, domain, grid_points);
  return worst <= spec.lipschitz_bound * (1.0 + 1e-9);
}

double max_abs_on_grid(const DriftSpec& spec, Interval domain, int grid_points) {
  require_bounded(domain, "max_abs_on_grid");
  if (grid_points < 2) {
    throw ConfigError("max_abs_on_grid: need at least 2 grid points");
  }
  const double h = domain.width() / (grid_points - 1);
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    worst = std::max(worst, std::abs(spec.eval(domain.lo + i * h)));
  }
  return worst;
}

double antiderivative_mismatch(const DriftSpec& spec, Interval domain, int grid_points) {
  require_bounded(domain, "antiderivative_mismatch");
  if (!spec.has_antiderivative()) {
    throw ConfigError("antiderivative_mismatch: spec has no antiderivative");
  }
  if (grid_points < 3) {
    throw ConfigError("antiderivative_mismatch: need at least 3 grid points");
  }
  const double h = domain.width() / (grid_points - 1);
  double worst = 0.0;
  for (int i = 1; i + 1 < grid_points; ++i) {
    const double x = domain.lo + i * h;
    const double fd = (spec.antiderivative(x + h) - spec.antiderivative(x - h)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - spec.eval(x)));
  }
  return worst;
}

}  // namespace refsde
