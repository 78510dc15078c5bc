#include <cmath>
#include <doctest.h>
#include <functional>

#include "refsde/drift.hpp"
#include "refsde/errors.hpp"
#include "refsde/estimate.hpp"
#include "refsde/invariant.hpp"
#include "refsde/stats.hpp"

using namespace refsde;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int cells) {
  const double h = (b - a) / cells;
  double acc = f(a) + f(b);
  for (int i = 1; i < cells; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

const BarrierConfig kDomain{0.0, 3.0};

}  // namespace

TEST_CASE("theta = 0 reduces to the exact uniform density") {
  const InvariantDensity density(builtin_drift("sin2pi"), 0.0, 2.0, kDomain, -1);
  for (double x : {0.0, 0.1, 1.5, 2.9, 3.0}) {
    CHECK(density.pdf(x) == 1.0 / 3.0);
  }
  CHECK(density.cdf(1.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(density.normalization_check() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(density.pdf(-0.1) == 0.0);
  CHECK(density.pdf(3.1) == 0.0);
}

TEST_CASE("information functional under the uniform density") {
  // (1/3) * integral of f^2 over [0,3]: sin^2 over full periods, x, x^2
  CHECK(information_F(InvariantDensity(builtin_drift("sin2pi"), 0.0, 2.0, kDomain, -1)) ==
        doctest::Approx(0.5).epsilon(1e-10));
  CHECK(information_F(InvariantDensity(builtin_drift("sqrt"), 0.0, 2.0, kDomain, -1)) ==
        doctest::Approx(1.5).epsilon(1e-10));
  CHECK(information_F(InvariantDensity(builtin_drift("linear"), 0.0, 2.0, kDomain, -1)) ==
        doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("linear drift yields the truncated Gaussian kernel") {
  // theta=1, sigma=2, f(x) = -x, sign -1: density ~ exp(-x^2/4) on [0,3]
  const InvariantDensity density(builtin_drift("linear"), 1.0, 2.0, kDomain, -1);
  const auto kernel = [](double x) { return std::exp(-x * x / 4.0); };
  const double z_simpson = simpson(kernel, 0.0, 3.0, 3000);
  const double z_closed = std::sqrt(3.14159265358979323846) * std::erf(1.5);
  CHECK(z_simpson == doctest::Approx(z_closed).epsilon(1e-10));
  for (double x : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    CHECK(density.pdf(x) == doctest::Approx(kernel(x) / z_closed).epsilon(1e-9));
  }
  CHECK(density.normalization_check() == doctest::Approx(1.0).epsilon(1e-8));

  // the opposite convention tilts the other way
  const InvariantDensity flipped(builtin_drift("linear"), 1.0, 2.0, kDomain, +1);
  CHECK(density.pdf(0.1) > density.pdf(2.9));
  CHECK(flipped.pdf(0.1) < flipped.pdf(2.9));
}

TEST_CASE("cdf is monotone with the right endpoints") {
  const InvariantDensity density(builtin_drift("sin2pi"), 1.0, 2.0, kDomain, -1);
  CHECK(density.cdf(0.0) == 0.0);
  CHECK(density.cdf(3.0) == 1.0);
  double prev = 0.0;
  for (int i = 1; i <= 60; ++i) {
    const double c = density.cdf(3.0 * i / 60.0);
    CHECK(c >= prev);
    prev = c;
  }
  // cdf derivative tracks pdf
  const double x = 1.23;
  const double h = 1e-5;
  CHECK((density.cdf(x + h) - density.cdf(x - h)) / (2.0 * h) ==
        doctest::Approx(density.pdf(x)).epsilon(1e-4));
}

TEST_CASE("one-sided density with an integrable tail") {
  const BarrierConfig one_sided{0.0, std::nullopt};
  const InvariantDensity density(builtin_drift("sqrt"), -1.0, 2.0, one_sided, -1);
  CHECK(density.normalization_check() == doctest::Approx(1.0).epsilon(1e-8));
  // unnormalized kernel exp(-x^{3/2}/3), Simpson oracle on the truncated range
  const auto kernel = [](double x) { return std::exp(-std::pow(x, 1.5) / 3.0); };
  const double z = simpson(kernel, 0.0, density.upper_effective(), 20000);
  CHECK(density.pdf(1.0) == doctest::Approx(kernel(1.0) / z).epsilon(1e-7));
  CHECK(density.pdf(0.0) > density.pdf(5.0));
  CHECK(information_F(density) == doctest::Approx(simpson(
            [&](double x) { return x * kernel(x) / z; }, 0.0, density.upper_effective(),
            20000)).epsilon(1e-7));
}

TEST_CASE("non-integrable one-sided densities fail with a tail diagnostic") {
  const BarrierConfig one_sided{0.0, std::nullopt};
  CHECK_THROWS_WITH_AS(
      InvariantDensity(builtin_drift("sqrt"), 1.0, 2.0, one_sided, -1),
      doctest::Contains("not integrable"), NumericalError);
  // bounded oscillating exponent never decays either way
  CHECK_THROWS_AS(InvariantDensity(builtin_drift("sin2pi"), 1.0, 2.0, one_sided, -1),
                  NumericalError);
  CHECK_THROWS_AS(InvariantDensity(builtin_drift("sin2pi"), 1.0, 2.0, one_sided, +1),
                  NumericalError);
  CHECK_THROWS_AS(InvariantDensity(builtin_drift("sin2pi"), 0.0, 2.0, one_sided, -1),
                  NumericalError);
}

TEST_CASE("asymptotic variance is sigma^2 / F") {
  CHECK(asymptotic_variance(0.5, 2.0) == 8.0);
  CHECK(asymptotic_variance(1.5, 2.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(asymptotic_variance(0.0, 2.0), NumericalError);
}

TEST_CASE("F is invariant under negating the drift (f^2 is even)") {
  DriftSpec negated = builtin_drift("sqrt");
  const auto base_eval = builtin_drift("sqrt").eval;
  const auto base_anti = builtin_drift("sqrt").antiderivative;
  negated.eval = [base_eval](double x) { return -base_eval(x); };
  negated.antiderivative = [base_anti](double x) { return -base_anti(x); };
  // (f, theta) and (-f, -theta) share the same exponent, hence the same density
  const InvariantDensity a(builtin_drift("sqrt"), 1.0, 2.0, kDomain, -1);
  const InvariantDensity b(negated, -1.0, 2.0, kDomain, -1);
  CHECK(information_F(a) == doctest::Approx(information_F(b)).epsilon(1e-12));
}

TEST_CASE("histogram oracle selects the scale/speed convention") {
  const DriftSpec drift = builtin_drift("linear");
  SimConfig oracle;
  oracle.drift = drift;
  oracle.theta = 1.0;
  oracle.sigma = 2.0;
  oracle.barriers = kDomain;
  oracle.x0 = 1.5;
  oracle.dt = 1e-3;
  oracle.n_steps = 500000;
  oracle.rng_seed = 31337;
  const SignSelection verdict = select_sign_convention(drift, 1.0, 2.0, kDomain, oracle);
  CHECK(verdict.selected == -1);
  CHECK(verdict.ks_plus > 2.0 * verdict.ks_minus);
  CHECK(verdict.selected == kDefaultSignConvention);
}

TEST_CASE("sigma^2/F matches the replicate variance of sqrt(T) errors") {
  const DriftSpec drift = builtin_drift("sin2pi");
  const double F = information_F(InvariantDensity(drift, 1.0, 2.0, kDomain, -1));
  const double target = asymptotic_variance(F, 2.0);
  std::vector<double> scaled;
  for (int r = 0; r < 400; ++r) {
    SimConfig sim;
    sim.drift = drift;
    sim.theta = 1.0;
    sim.sigma = 2.0;
    sim.barriers = kDomain;
    sim.x0 = 1.5;
    sim.dt = 0.02;
    sim.n_steps = 2500;  // T = 50
    sim.rng_seed = 301000000ull + static_cast<std::uint64_t>(r);
    EstimateOptions options;
    options.sigma = 2.0;
    const double theta_hat = estimate(simulate(sim), drift, options).theta_hat;
    scaled.push_back(std::sqrt(50.0) * (theta_hat - 1.0));
  }
  const SampleStats stats = sample_stats(scaled);
  const double empirical = stats.std_dev * stats.std_dev;
  CHECK(std::abs(empirical - target) / target < 0.25);
}

TEST_CASE("degenerate drift is rejected by the F guard") {
  DriftSpec zero = builtin_drift("linear");
  zero.eval = [](double) { return 1e-9; };
  zero.antiderivative = [](double x) { return 1e-9 * x; };
  const InvariantDensity density(zero, 0.0, 2.0, kDomain, -1);
  // F ~ 1e-18 < 1e-14
  CHECK_THROWS_AS(information_F(density), NumericalError);
}

TEST_CASE("invalid construction parameters") {
  CHECK_THROWS_AS(InvariantDensity(builtin_drift("sqrt"), 1.0, 0.0, kDomain, -1),
                  ConfigError);
  CHECK_THROWS_AS(InvariantDensity(builtin_drift("sqrt"), 1.0, 2.0, kDomain, 2),
                  ConfigError);
}
