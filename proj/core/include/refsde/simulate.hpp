#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "refsde/drift.hpp"

namespace refsde {

/// One-sided [lower, inf) when `upper` is absent, two-sided [lower, upper]
/// otherwise. Requires 0 <= lower and, when present, lower < upper < inf.
struct BarrierConfig {
  double lower = 0.0;
  std::optional<double> upper;

  bool two_sided() const { return upper.has_value(); }
  double width() const;          // upper - lower; +inf when one-sided
  bool contains(double x) const;
  void validate() const;
};

enum class Scheme { projection, lepingle };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct SimConfig {
  DriftSpec drift;
  double theta = 0.0;
  double sigma = 1.0;
  BarrierConfig barriers;
  double x0 = 0.0;
  double dt = 0.0;
  std::int64_t n_steps = 0;
  std::uint64_t rng_seed = 0;
  Scheme scheme = Scheme::projection;

  double horizon() const { return static_cast<double>(n_steps) * dt; }
  void validate() const;
};

/// Result of one discrete Skorokhod reflection: the regulated state and the
/// minimal regulator increments with x_new = x_free + dl - dr.
struct StepResult {
  double x = 0.0;
  double dl = 0.0;
  double dr = 0.0;
};

/// Minimal one-step reflection of a free point into the barrier interval
/// (the clamp). dl > 0 forces x = lower, dr > 0 forces x = upper.
StepResult skorokhod_step(double x_free, const BarrierConfig& barriers);

/// A simulated (or loaded) trajectory on the uniform grid t_i = i * dt.
///
/// dL/dR hold the exact per-step regulator increments; l_cum/r_cum their
/// running sums, accumulated during simulation. The path CSV stores the
/// cumulative columns, so code that must agree bitwise across a save/load
/// round trip (the estimators) consumes adjacent differences of l_cum/r_cum
/// rather than dL/dR directly.
struct ReflectedPath {
  SimConfig config;
  std::vector<double> times;   // n+1
  std::vector<double> states;  // n+1
  std::vector<double> dL;      // n
  std::vector<double> dR;      // n
  std::vector<double> dW;      // n; empty when loaded from CSV
  std::vector<double> l_cum;   // n+1, starts at 0
  std::vector<double> r_cum;   // n+1, starts at 0
  std::int64_t overshoot_steps = 0;  // free point beyond the far barrier by > width
  bool lepingle_fallback = false;    // lepingle requested on a two-sided domain

  std::int64_t n_steps() const { return static_cast<std::int64_t>(dL.size()); }
  double horizon() const { return times.empty() ? 0.0 : times.back(); }
  bool has_noise_increments() const { return !dW.empty(); }
};

/// Euler-Maruyama with per-step Skorokhod reflection (projection scheme).
/// Scheme::lepingle additionally samples the running minimum of the Brownian
/// bridge within each step (one-sided domains only; see below) so regulator
/// mass accrued away from the endpoint is captured.
///
/// Deterministic given rng_seed. Brownian increments are i.i.d. N(0, dt).
/// On a two-sided domain a lepingle request falls back to projection and
/// sets `lepingle_fallback` on the returned path.
ReflectedPath simulate(const SimConfig& config);

/// One-sided variant: requires barriers.upper to be absent; dR is
/// identically zero and states lie in [lower, inf).
ReflectedPath simulate_one_sided(const SimConfig& config);

struct PathCheck {
  bool ok = true;
  std::int64_t first_bad_step = -1;
  std::string message;
};

/// Verifies the per-step Skorokhod identity (when dW is available), state
/// containment, regulator nonnegativity/monotonicity and discrete
/// complementarity, each to tolerance `tol`. Complementarity (an increment
/// forces the endpoint onto its barrier) holds for the projection scheme by
/// construction; for lepingle paths the bridge minimum may regulate a step
/// that ends in the interior, so that check is skipped.
PathCheck check_path_invariants(const ReflectedPath& path, double tol = 1e-12);

}  // namespace refsde
