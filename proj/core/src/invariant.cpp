#include "refsde/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "refsde/errors.hpp"
#include "refsde/quadrature.hpp"
#include "refsde/stats.hpp"
#include "refsde/stepper.hpp"

namespace refsde {

namespace {

constexpr int kCdfGridCells = 8192;
constexpr double kTailDropLog = -36.841361487904734;  // log(1e-16)

// 5-point Gauss-Legendre nodes/weights on [-1, 1]; used for the cached CDF.
constexpr double kGlNode[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
constexpr double kGlWeight[5] = {0.2369268850561891, 0.4786286704993665,
                                 0.5688888888888889, 0.4786286704993665,
                                 0.2369268850561891};

}  // namespace

InvariantDensity::InvariantDensity(DriftSpec drift, double theta, double sigma,
                                   BarrierConfig barriers, int sign_convention)
    : drift_(std::move(drift)),
      theta_(theta),
      sigma_(sigma),
      barriers_(barriers),
      sign_(sign_convention) {
  barriers_.validate();
  if (!(sigma_ > 0.0)) {
    throw ConfigError("invariant density: sigma must be positive");
  }
  if (sign_ != 1 && sign_ != -1) {
    throw ConfigError("invariant density: sign_convention must be +1 or -1");
  }

  if (theta_ == 0.0) {
    // The exponent vanishes identically; the two-sided density is uniform.
    if (!barriers_.two_sided()) {
      throw NumericalError(
          "one-sided invariant density does not exist for theta = 0 "
          "(flat unnormalized density has no integrable tail)");
    }
    uniform_ = true;
    upper_eff_ = *barriers_.upper;
    shift_ = 0.0;
    normalizer_ = barriers_.width();
    return;
  }

  const double l = barriers_.lower;
  if (barriers_.two_sided()) {
    upper_eff_ = *barriers_.upper;
  } else {
    // Scan outward until the unnormalized density drops 16 orders of
    // magnitude below its running maximum; no such point within a huge
    // range means the tail is not integrable.
    double running_max = exponent(l);
    double x = l;
    double step = 1.0;
    bool found = false;
    while (x < l + 1e9) {
      x += step;
      step *= 2.0;
      const double e = exponent(x);
      running_max = std::max(running_max, e);
      if (e - running_max <= kTailDropLog) {
        upper_eff_ = x;
        found = true;
        break;
      }
    }
    if (!found) {
      std::ostringstream msg;
      msg << "one-sided invariant density is not integrable: unnormalized "
             "density at x = "
          << x << " is exp(" << exponent(x) - running_max
          << ") of its maximum; required drop below exp(" << kTailDropLog
          << ") never occurred (tail bound failed)";
      throw NumericalError(msg.str());
    }
  }

  // Stability shift: max of the exponent over a dense scan plus endpoints.
  shift_ = std::max(exponent(l), exponent(upper_eff_));
  const int scan = 4096;
  const double h = (upper_eff_ - l) / scan;
  for (int i = 1; i < scan; ++i) {
    shift_ = std::max(shift_, exponent(l + i * h));
  }

  normalizer_ = integrate(
      [this](double x) { return std::exp(exponent(x) - shift_); }, l, upper_eff_, 1e-10);
  if (!(normalizer_ > 0.0) || !std::isfinite(normalizer_)) {
    throw NumericalError("invariant density: normalizer is not positive and finite");
  }

  // Cached CDF on a uniform grid (per-cell 5-point Gauss-Legendre), then
  // rescaled so the last entry is exactly 1.
  grid_x_.resize(kCdfGridCells + 1);
  grid_cdf_.resize(kCdfGridCells + 1);
  const double cell = (upper_eff_ - l) / kCdfGridCells;
  grid_x_[0] = l;
  grid_cdf_[0] = 0.0;
  double acc = 0.0;
  for (int i = 0; i < kCdfGridCells; ++i) {
    const double a = l + i * cell;
    const double mid = a + 0.5 * cell;
    double cell_mass = 0.0;
    for (int k = 0; k < 5; ++k) {
      const double x = mid + 0.5 * cell * kGlNode[k];
      cell_mass += kGlWeight[k] * std::exp(exponent(x) - shift_);
    }
    acc += cell_mass * 0.5 * cell;
    grid_x_[i + 1] = l + (i + 1) * cell;
    grid_cdf_[i + 1] = acc;
  }
  const double total = grid_cdf_.back();
  for (double& c : grid_cdf_) c /= total;
}

double InvariantDensity::exponent(double x) const {
  return sign_ * (-2.0 * theta_ / (sigma_ * sigma_)) *
         drift_.integral(barriers_.lower, x);
}

double InvariantDensity::pdf(double x) const {
  if (x < barriers_.lower || x > upper_eff_) return 0.0;
  if (uniform_) return 1.0 / normalizer_;
  return std::exp(exponent(x) - shift_) / normalizer_;
}

double InvariantDensity::cdf(double x) const {
  const double l = barriers_.lower;
  if (x <= l) return 0.0;
  if (x >= upper_eff_) return 1.0;
  if (uniform_) return (x - l) / normalizer_;
  const double cell = (upper_eff_ - l) / kCdfGridCells;
  const auto idx = static_cast<std::size_t>((x - l) / cell);
  const std::size_t i = std::min(idx, static_cast<std::size_t>(kCdfGridCells - 1));
  const double w = (x - grid_x_[i]) / cell;
  return grid_cdf_[i] + w * (grid_cdf_[i + 1] - grid_cdf_[i]);
}

double InvariantDensity::normalization_check() const {
  return integrate([this](double x) { return pdf(x); }, barriers_.lower, upper_eff_,
                   1e-10);
}

InvariantDensity invariant_density(const DriftSpec& drift, double theta, double sigma,
                                   const BarrierConfig& barriers, int sign_convention) {
  return InvariantDensity(drift, theta, sigma, barriers, sign_convention);
}

double information_F(const InvariantDensity& density) {
  const DriftSpec& f = density.drift();
  const double value = integrate(
      [&](double x) {
        const double fx = f.eval(x);
        return fx * fx * density.pdf(x);
      },
      density.barriers().lower, density.upper_effective(), 1e-10);
  if (value < 1e-14) {
    throw NumericalError(
        "information functional F is numerically degenerate (< 1e-14): drift "
        "vanishes on the effective domain");
  }
  return value;
}

double asymptotic_variance(double F, double sigma) {
  if (!(F > 0.0)) {
    throw NumericalError("asymptotic_variance: F must be positive");
  }
  return sigma * sigma / F;
}

SignSelection select_sign_convention(const DriftSpec& drift, double theta, double sigma,
                                     const BarrierConfig& barriers, const SimConfig& oracle) {
  std::vector<double> sample;
  sample.reserve(static_cast<std::size_t>(oracle.n_steps));
  simulate_visit(oracle, [&](const StepRecord& step) { sample.push_back(step.x_next); });

  const double inf = std::numeric_limits<double>::infinity();
  auto score = [&](int sign) {
    try {
      const InvariantDensity density(drift, theta, sigma, barriers, sign);
      return ks_distance(sample, [&](double x) { return density.cdf(x); });
    } catch (const NumericalError&) {
      return inf;
    }
  };

  SignSelection out;
  out.ks_minus = score(-1);
  out.ks_plus = score(+1);
  if (out.ks_minus == inf && out.ks_plus == inf) {
    throw NumericalError(
        "sign-convention selection: neither convention yields an integrable "
        "density for this configuration");
  }
  out.selected = out.ks_minus <= out.ks_plus ? -1 : +1;
  return out;
}

}  // namespace refsde
