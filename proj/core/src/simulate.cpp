#include "refsde/simulate.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "refsde/errors.hpp"
#include "refsde/stepper.hpp"

namespace refsde {

double BarrierConfig::width() const {
  return two_sided() ? *upper - lower : std::numeric_limits<double>::infinity();
}

bool BarrierConfig::contains(double x) const {
  if (x < lower) return false;
  return !two_sided() || x <= *upper;
}

void BarrierConfig::validate() const {
  if (!(lower >= 0.0)) {
    throw InvariantViolation("barriers: lower barrier must satisfy 0 <= l");
  }
  if (two_sided()) {
    if (!(lower < *upper) || !std::isfinite(*upper)) {
      throw InvariantViolation("barriers: need l < u < inf for two-sided domains");
    }
  }
}

std::string scheme_name(Scheme s) {
  return s == Scheme::projection ? "projection" : "lepingle";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "projection") return Scheme::projection;
  if (name == "lepingle") return Scheme::lepingle;
  throw ConfigError("unknown scheme \"" + name + "\"; valid: {projection, lepingle}");
}

void SimConfig::validate() const {
  barriers.validate();
  if (!drift.eval) {
    throw ConfigError("sim config: drift function is empty");
  }
  if (!(sigma >= 0.0)) {
    throw ConfigError("sim config: sigma must be nonnegative");
  }
  if (!(dt > 0.0)) {
    throw ConfigError("sim config: dt must be positive");
  }
  if (n_steps <= 0) {
    throw ConfigError("sim config: n_steps must be positive");
  }
  if (!barriers.contains(x0)) {
    std::ostringstream msg;
    msg << "sim config: x0 = " << x0 << " violates x0 in ["
        << barriers.lower << ", ";
    if (barriers.two_sided()) {
      msg << *barriers.upper << "]";
    } else {
      msg << "inf)";
    }
    throw InvariantViolation(msg.str());
  }
}

StepResult skorokhod_step(double x_free, const BarrierConfig& barriers) {
  StepResult out;
  if (x_free < barriers.lower) {
    out.x = barriers.lower;
    out.dl = barriers.lower - x_free;
  } else if (barriers.two_sided() && x_free > *barriers.upper) {
    out.x = *barriers.upper;
    out.dr = x_free - *barriers.upper;
  } else {
    out.x = x_free;
  }
  return out;
}

namespace {

ReflectedPath run_simulation(const SimConfig& config) {
  const auto n = static_cast<std::size_t>(std::max<std::int64_t>(config.n_steps, 0));
  ReflectedPath path;
  path.times.resize(n + 1);
  path.states.resize(n + 1);
  path.dL.assign(n, 0.0);
  path.dR.assign(n, 0.0);
  path.dW.resize(n);
  path.l_cum.assign(n + 1, 0.0);
  path.r_cum.assign(n + 1, 0.0);
  path.times[0] = 0.0;
  path.states[0] = config.x0;

  const Scheme used = simulate_visit(config, [&](const StepRecord& step) {
    const auto i = static_cast<std::size_t>(step.index);
    path.dW[i] = step.dw;
    path.dL[i] = step.dl;
    path.dR[i] = step.dr;
    path.states[i + 1] = step.x_next;
    path.l_cum[i + 1] = path.l_cum[i] + step.dl;
    path.r_cum[i + 1] = path.r_cum[i] + step.dr;
    path.times[i + 1] = static_cast<double>(i + 1) * config.dt;
    if (step.overshoot) ++path.overshoot_steps;
  });

  path.config = config;
  path.config.scheme = used;
  path.lepingle_fallback = used != config.scheme;
  return path;
}

}  // namespace

ReflectedPath simulate(const SimConfig& config) { return run_simulation(config); }

ReflectedPath simulate_one_sided(const SimConfig& config) {
  if (config.barriers.two_sided()) {
    throw ConfigError("simulate_one_sided: upper barrier must be absent");
  }
  return run_simulation(config);
}

namespace {

PathCheck fail(std::int64_t step, const std::string& message) {
  PathCheck out;
  out.ok = false;
  out.first_bad_step = step;
  out.message = message;
  return out;
}

}  // namespace

PathCheck check_path_invariants(const ReflectedPath& path, double tol) {
  const BarrierConfig& barriers = path.config.barriers;
  const auto n = static_cast<std::size_t>(path.n_steps());
  if (path.states.size() != n + 1 || path.l_cum.size() != n + 1 ||
      path.r_cum.size() != n + 1 || path.dR.size() != n) {
    return fail(-1, "inconsistent array lengths");
  }
  const bool check_identity = path.has_noise_increments();
  const bool check_complementarity = path.config.scheme == Scheme::projection;

  for (std::size_t i = 0; i <= n; ++i) {
    const double x = path.states[i];
    if (x < barriers.lower - tol ||
        (barriers.two_sided() && x > *barriers.upper + tol)) {
      std::ostringstream msg;
      msg << "state " << x << " outside barrier interval at step " << i;
      return fail(static_cast<std::int64_t>(i), msg.str());
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (path.dL[i] < 0.0 || path.dR[i] < 0.0) {
      return fail(static_cast<std::int64_t>(i), "negative regulator increment");
    }
    if (path.l_cum[i + 1] < path.l_cum[i] || path.r_cum[i + 1] < path.r_cum[i]) {
      return fail(static_cast<std::int64_t>(i), "cumulative regulator decreased");
    }
    if (check_complementarity) {
      if (path.dL[i] > tol && std::abs(path.states[i + 1] - barriers.lower) > tol) {
        std::ostringstream msg;
        msg << "dL = " << path.dL[i] << " with interior endpoint at step " << i;
        return fail(static_cast<std::int64_t>(i), msg.str());
      }
      if (path.dR[i] > tol &&
          (!barriers.two_sided() || std::abs(path.states[i + 1] - *barriers.upper) > tol)) {
        std::ostringstream msg;
        msg << "dR = " << path.dR[i] << " with non-upper endpoint at step " << i;
        return fail(static_cast<std::int64_t>(i), msg.str());
      }
    }
    if (check_identity) {
      const double x = path.states[i];
      const double predicted = x +
                               path.config.theta * path.config.drift.eval(x) * path.config.dt +
                               path.config.sigma * path.dW[i] + path.dL[i] - path.dR[i];
      if (std::abs(path.states[i + 1] - predicted) > tol) {
        std::ostringstream msg;
        msg << "Skorokhod identity off by " << std::abs(path.states[i + 1] - predicted)
            << " at step " << i;
        return fail(static_cast<std::int64_t>(i), msg.str());
      }
    }
  }
  if (path.l_cum[0] != 0.0 || path.r_cum[0] != 0.0) {
    return fail(0, "cumulative regulators must start at zero");
  }
  return PathCheck{};
}

}  // namespace refsde
