#include <cmath>
#include <doctest.h>
#include <limits>

#include "refsde/drift.hpp"
#include "refsde/errors.hpp"

using namespace refsde;

namespace {

// Independent quadrature oracle: composite Simpson.
double simpson(const std::function<double(double)>& f, double a, double b, int cells) {
  const double h = (b - a) / cells;
  double acc = f(a) + f(b);
  for (int i = 1; i < cells; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("builtin evaluations") {
  CHECK(builtin_drift("sin2pi").eval(0.25) == 1.0);
  CHECK(builtin_drift("sqrt").eval(4.0) == 2.0);
  CHECK(builtin_drift("linear").eval(2.0) == -2.0);
}

TEST_CASE("unknown drift names list the valid set") {
  try {
    builtin_drift("cubic");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("sin2pi") != std::string::npos);
    CHECK(msg.find("sqrt") != std::string::npos);
    CHECK(msg.find("linear") != std::string::npos);
  }
}

TEST_CASE("registry lookups are deterministic") {
  const DriftSpec a = builtin_drift("sqrt");
  const DriftSpec b = builtin_drift("sqrt");
  for (double x : {0.0, 0.3, 1.0, 2.7}) {
    CHECK(a.eval(x) == b.eval(x));
    CHECK(a.antiderivative(x) == b.antiderivative(x));
  }
  CHECK(a.lipschitz_bound == b.lipschitz_bound);
}

TEST_CASE("sin2pi antiderivative from 0 to 0.5 equals 1/pi") {
  const DriftSpec spec = builtin_drift("sin2pi");
  const double closed = spec.integral(0.0, 0.5);
  CHECK(closed == doctest::Approx(1.0 / 3.14159265358979323846).epsilon(1e-14));
  const double oracle = simpson([&](double x) { return spec.eval(x); }, 0.0, 0.5, 2000);
  CHECK(closed == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("sqrt antiderivative matches its closed form from any barrier") {
  const DriftSpec spec = builtin_drift("sqrt");
  // integral(l, x) = (2/3)(x^{3/2} - l^{3/2})
  CHECK(spec.integral(1.0, 4.0) ==
        doctest::Approx((2.0 / 3.0) * (8.0 - 1.0)).epsilon(1e-14));
  const double oracle = simpson([&](double x) { return spec.eval(x); }, 1.0, 4.0, 2000);
  CHECK(spec.integral(1.0, 4.0) == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("quadrature fallback when the antiderivative is absent") {
  DriftSpec spec = builtin_drift("sin2pi");
  spec.antiderivative = nullptr;
  CHECK_FALSE(spec.has_antiderivative());
  CHECK(spec.integral(0.0, 0.5) ==
        doctest::Approx(1.0 / 3.14159265358979323846).epsilon(1e-9));
}

TEST_CASE("antiderivative consistency on a dense grid") {
  CHECK(antiderivative_mismatch(builtin_drift("sin2pi"), {0.0, 3.0}, 100001) < 1e-6);
  CHECK(antiderivative_mismatch(builtin_drift("linear"), {0.0, 3.0}, 100001) < 1e-6);
  // sqrt's curvature blows up at 0; the check holds away from the corner
  CHECK(antiderivative_mismatch(builtin_drift("sqrt"), {0.05, 3.0}, 100001) < 1e-6);
}

TEST_CASE("non-triviality on the experiment domain") {
  for (const auto& name : builtin_drift_names()) {
    CHECK(max_abs_on_grid(builtin_drift(name), {0.0, 3.0}, 10000) > 0.0);
  }
}

TEST_CASE("lipschitz grid check for sin2pi and linear") {
  CHECK(validate_lipschitz(builtin_drift("sin2pi"), {0.0, 3.0}, 10000));
  CHECK(validate_lipschitz(builtin_drift("linear"), {0.0, 3.0}, 100));
}

TEST_CASE("lipschitz grid check brackets the sqrt difference quotient") {
  DriftSpec spec = builtin_drift("sqrt");
  // independent oracle for the largest adjacent-pair quotient on this grid
  const int points = 10000;
  const double h = 3.0 / (points - 1);
  double worst = 0.0;
  double prev = 0.0;
  for (int i = 1; i < points; ++i) {
    const double cur = std::sqrt(i * h);
    worst = std::max(worst, (cur - prev) / h);
    prev = cur;
  }
  CHECK(max_difference_quotient(spec, {0.0, 3.0}, points) ==
        doctest::Approx(worst).epsilon(1e-12));

  spec.lipschitz_bound = worst * 0.999;
  CHECK_FALSE(validate_lipschitz(spec, {0.0, 3.0}, points));
  spec.lipschitz_bound = worst * 1.001;
  CHECK(validate_lipschitz(spec, {0.0, 3.0}, points));
}

TEST_CASE("sqrt bound holds on [1e-6, u] but fails once the grid resolves 0") {
  const DriftSpec spec = builtin_drift("sqrt");
  CHECK(spec.lipschitz_bound == 500.0);
  CHECK(validate_lipschitz(spec, {1e-6, 3.0}, 10000));
  CHECK(validate_lipschitz(spec, {0.0, 3.0}, 10000));  // coarse grid: quotient ~58
  // fine grid near the barrier: the x -> 0 quotient exceeds any stored bound
  CHECK_FALSE(validate_lipschitz(spec, {0.0, 0.03}, 3000001));
}

TEST_CASE("unbounded domains must be truncated by the caller") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate_lipschitz(builtin_drift("sqrt"), {0.0, inf}, 100), ConfigError);
  CHECK_THROWS_WITH_AS(validate_lipschitz(builtin_drift("sqrt"), {0.0, inf}, 100),
                       doctest::Contains("truncate"), ConfigError);
}

TEST_CASE("parameter space interval") {
  const ParameterSpace space(1.5, 0.5);
  CHECK(space.lower() == 1.0);
  CHECK(space.upper() == 2.0);
  CHECK(space.contains(1.0));
  CHECK(space.contains(2.0));
  CHECK_FALSE(space.contains(2.0000001));
  CHECK_THROWS_AS(ParameterSpace(0.0, -1.0), ConfigError);
  const ParameterSpace point(2.0, 0.0);
  CHECK(point.contains(2.0));
  CHECK_FALSE(point.contains(1.9999));
}
