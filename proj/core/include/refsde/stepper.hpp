#pragma once

#include <algorithm>
#include <cmath>

#include "refsde/errors.hpp"
#include "refsde/rng.hpp"
#include "refsde/simulate.hpp"

namespace refsde {

/// One executed simulation step, as seen by a visitor.
struct StepRecord {
  std::int64_t index;
  double x;       // state at the left endpoint
  double dw;      // Brownian increment (units sqrt(time))
  double dl;      // regulator increments of this step
  double dr;
  double x_next;  // state at the right endpoint
  bool overshoot;  // free point beyond the far barrier by > width
};

/// Core stepping loop shared by simulate(), the histogram oracles and the
/// streaming diagnostics. Calls visitor(StepRecord) once per step without
/// retaining anything, so horizons of 1e8 steps run in O(1) memory. The
/// draw sequence is identical to simulate() for the same config.
///
/// Returns the scheme actually used (lepingle on a two-sided domain falls
/// back to projection).
template <class Visitor>
Scheme simulate_visit(const SimConfig& config, Visitor&& visitor) {
  config.validate();

  Scheme scheme = config.scheme;
  if (scheme == Scheme::lepingle && config.barriers.two_sided()) {
    scheme = Scheme::projection;
  }

  const BarrierConfig& barriers = config.barriers;
  const double width = barriers.width();
  const double sqrt_dt = std::sqrt(config.dt);
  RngStream rng(config.rng_seed);

  double x = config.x0;
  for (std::int64_t i = 0; i < config.n_steps; ++i) {
    const double dw = sqrt_dt * rng.normal();
    const double x_free =
        x + config.theta * config.drift.eval(x) * config.dt + config.sigma * dw;

    double x_new;
    double dl = 0.0;
    double dr = 0.0;
    if (scheme == Scheme::lepingle) {
      // Reflect by the sampled running minimum of the Brownian bridge, not
      // just the endpoint; regulator mass may accrue on interior-ending steps.
      double minimum;
      if (config.sigma > 0.0) {
        const double d = x_free - x;
        const double disc =
            d * d - 2.0 * config.sigma * config.sigma * config.dt * std::log(rng.uniform());
        minimum = 0.5 * (x + x_free - std::sqrt(disc));
      } else {
        minimum = std::min(x, x_free);
      }
      dl = std::max(0.0, barriers.lower - minimum);
      x_new = x_free + dl;
      if (dl > 0.0 && x_new < barriers.lower) x_new = barriers.lower;
    } else {
      const StepResult step = skorokhod_step(x_free, barriers);
      x_new = step.x;
      dl = step.dl;
      dr = step.dr;
    }

    const bool overshoot =
        x_free < barriers.lower - width ||
        (barriers.two_sided() && x_free > *barriers.upper + width);

    visitor(StepRecord{i, x, dw, dl, dr, x_new, overshoot});
    x = x_new;
  }
  return scheme;
}

}  // namespace refsde
