#include "refsde/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>
#include <utility>

#include "refsde/errors.hpp"
#include "refsde/format.hpp"
#include "refsde/invariant.hpp"
#include "refsde/stats.hpp"
#include "refsde/stepper.hpp"

namespace refsde {

std::string barrier_kind_name(BarrierKind k) {
  return k == BarrierKind::two_sided ? "two_sided" : "one_sided";
}

BarrierKind barrier_kind_from_name(const std::string& name) {
  if (name == "two_sided") return BarrierKind::two_sided;
  if (name == "one_sided") return BarrierKind::one_sided;
  throw ConfigError("unknown barrier kind \"" + name +
                    "\"; valid: {two_sided, one_sided}");
}

void ExperimentConfig::validate() const {
  builtin_drift(drift_name);  // raises on unknown names
  barriers.validate();
  if (!(sigma >= 0.0)) throw ConfigError("experiment: sigma must be nonnegative");
  if (!(dt > 0.0)) throw ConfigError("experiment: dt must be positive");
  if (replicates < 2) throw ConfigError("experiment: replicates must be >= 2");
  if (n_list.empty()) throw ConfigError("experiment: n_list must be nonempty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] <= 0) throw ConfigError("experiment: n_list entries must be positive");
    if (i > 0 && n_list[i] <= n_list[i - 1]) {
      throw ConfigError("experiment: n_list must be strictly increasing");
    }
  }
  if (!(ci_level > 0.0 && ci_level < 1.0)) {
    throw ConfigError("experiment: ci_level must lie in (0, 1)");
  }
  if (threads < 1) throw ConfigError("experiment: threads must be >= 1");
  for (BarrierKind kind : effective_kinds()) {
    if (kind == BarrierKind::two_sided && !barriers.two_sided()) {
      throw ConfigError("experiment: two_sided runs need an upper barrier");
    }
    const double x = x0_for(kind);
    if (x < barriers.lower ||
        (kind == BarrierKind::two_sided && x > *barriers.upper)) {
      throw InvariantViolation("experiment: x0 outside the barrier interval");
    }
  }
}

double ExperimentConfig::x0_for(BarrierKind kind) const {
  if (x0.has_value()) return *x0;
  if (kind == BarrierKind::two_sided && barriers.two_sided()) {
    return barriers.lower + 0.5 * barriers.width();
  }
  return barriers.lower + 1.0;
}

std::vector<BarrierKind> ExperimentConfig::effective_kinds() const {
  if (!kinds.empty()) return kinds;
  if (barriers.two_sided()) {
    return {BarrierKind::two_sided, BarrierKind::one_sided};
  }
  return {BarrierKind::one_sided};
}

namespace {

struct ReplicateOutcome {
  bool ok = false;
  EstimateResult result;
};

// F for standardization: quadrature of the default sign convention when the
// density exists, otherwise the mean plug-in over surviving replicates.
std::pair<double, bool> standardization_F(const DriftSpec& drift,
                                          const ExperimentConfig& config,
                                          const BarrierConfig& barriers,
                                          const std::vector<EstimateResult>& kept) {
  const auto plug_in = [&kept]() -> std::pair<double, bool> {
    double acc = 0.0;
    for (const auto& r : kept) acc += r.plug_in_F;
    return {kept.empty() ? 0.0 : acc / static_cast<double>(kept.size()), false};
  };
  try {
    const InvariantDensity density(drift, config.theta0, config.sigma, barriers,
                                   kDefaultSignConvention);
    return {information_F(density), true};
  } catch (const NumericalError&) {  // non-integrable / degenerate
    return plug_in();
  } catch (const ConfigError&) {  // sigma = 0 has no stationary density
    return plug_in();
  }
}

}  // namespace

McSummary run_experiment(const ExperimentConfig& config, bool keep_estimates) {
  config.validate();
  const DriftSpec drift = builtin_drift(config.drift_name);
  const int N = config.replicates;

  McSummary summary;
  for (BarrierKind kind : config.effective_kinds()) {
    BarrierConfig barriers = config.barriers;
    if (kind == BarrierKind::one_sided) barriers.upper.reset();

    for (int n : config.n_list) {
      SimConfig base;
      base.drift = drift;
      base.theta = config.theta0;
      base.sigma = config.sigma;
      base.barriers = barriers;
      base.x0 = config.x0_for(kind);
      base.dt = config.dt;
      base.n_steps = n;
      base.scheme = config.scheme;

      std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(N));
      auto worker = [&](int begin, int end) {
        for (int r = begin; r < end; ++r) {
          SimConfig sim = base;
          sim.rng_seed = config.base_seed + static_cast<std::uint64_t>(r);
          try {
            const ReflectedPath path = simulate(sim);
            EstimateOptions opts;
            opts.method = Method::MLE;
            opts.ci_level = config.ci_level;
            opts.sigma = config.sigma;
            outcomes[static_cast<std::size_t>(r)].result = estimate(path, drift, opts);
            outcomes[static_cast<std::size_t>(r)].ok = true;
          } catch (const NumericalError&) {
            outcomes[static_cast<std::size_t>(r)].ok = false;
          }
        }
      };

      const int threads = std::min(config.threads, N);
      if (threads <= 1) {
        worker(0, N);
      } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        const int chunk = (N + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
          const int begin = t * chunk;
          const int end = std::min(N, begin + chunk);
          if (begin >= end) break;
          pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
      }

      // Reduce in replicate order; parallelism never changes the output.
      std::vector<EstimateResult> kept;
      kept.reserve(static_cast<std::size_t>(N));
      int dropped = 0;
      for (const auto& o : outcomes) {
        if (o.ok) {
          kept.push_back(o.result);
        } else {
          ++dropped;
        }
      }

      McCell cell;
      cell.drift = config.drift_name;
      cell.theta0 = config.theta0;
      cell.kind = kind;
      cell.n = n;
      cell.dt = config.dt;
      cell.T = static_cast<double>(n) * config.dt;
      cell.replicates = N;
      cell.dropped = dropped;
      cell.flagged = dropped * 100 > N;

      if (!kept.empty()) {
        std::vector<double> errors;
        errors.reserve(kept.size());
        int covered = 0;
        double mse_acc = 0.0;
        for (const auto& r : kept) {
          const double err = r.theta_hat - config.theta0;
          errors.push_back(err);
          mse_acc += err * err;
          if (r.ci_lo <= config.theta0 && config.theta0 <= r.ci_hi) ++covered;
        }
        const SampleStats stats = sample_stats(errors);
        cell.bias = stats.mean;
        cell.std_dev = stats.std_dev;
        cell.mse = mse_acc / static_cast<double>(kept.size());
        cell.ci_coverage = static_cast<double>(covered) / static_cast<double>(kept.size());

        const auto [F, from_quadrature] =
            standardization_F(drift, config, barriers, kept);
        cell.F_used = F;
        cell.F_from_quadrature = from_quadrature;
        if (kept.size() >= 100 && F > 0.0) {
          cell.ks_stat = normality_diagnostic(kept, config.theta0, F, config.sigma);
        } else {
          cell.ks_stat = std::numeric_limits<double>::quiet_NaN();
        }
      } else {
        cell.ks_stat = std::numeric_limits<double>::quiet_NaN();
      }

      summary.cells.push_back(std::move(cell));
      if (keep_estimates) {
        summary.estimates.push_back(std::move(kept));
      }
    }
  }
  return summary;
}

double normality_diagnostic(const std::vector<EstimateResult>& estimates, double theta0,
                            double F, double sigma) {
  if (estimates.size() < 100) {
    throw ConfigError("normality_diagnostic: need at least 100 estimates");
  }
  if (!(F > 0.0) || !(sigma > 0.0)) {
    throw ConfigError("normality_diagnostic: F and sigma must be positive");
  }
  const double T = estimates.front().T;
  for (const auto& r : estimates) {
    if (r.T != T) {
      throw ConfigError("normality_diagnostic: estimates have heterogeneous horizons");
    }
  }
  const double scale = std::sqrt(T) * std::sqrt(F) / sigma;
  std::vector<double> z;
  z.reserve(estimates.size());
  for (const auto& r : estimates) {
    z.push_back(scale * (r.theta_hat - theta0));
  }
  return ks_distance_to_standard_normal(std::move(z));
}

double ergodic_diagnostic(const ReflectedPath& path, const DriftSpec& drift,
                          double F_quadrature) {
  if (!(path.horizon() >= 1000.0)) {
    throw ConfigError("ergodic_diagnostic: horizon must be at least 1000");
  }
  if (!(F_quadrature > 0.0)) {
    throw ConfigError("ergodic_diagnostic: F must be positive");
  }
  const auto n = static_cast<std::size_t>(path.n_steps());
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fx = drift.eval(path.states[i]);
    acc += fx * fx * path.config.dt;
  }
  const double avg = acc / path.horizon();
  return std::abs(avg - F_quadrature) / F_quadrature;
}

ErgodicAverages simulate_ergodic_averages(const SimConfig& config) {
  const double mid = config.barriers.two_sided()
                         ? config.barriers.lower + 0.5 * config.barriers.width()
                         : config.barriers.lower + 0.5;
  double sum_f = 0.0;
  double sum_f2 = 0.0;
  double sum_f_dw = 0.0;
  std::int64_t below = 0;
  simulate_visit(config, [&](const StepRecord& step) {
    const double fx = config.drift.eval(step.x);
    sum_f += fx;
    sum_f2 += fx * fx;
    sum_f_dw += fx * step.dw;
    if (step.x_next <= mid) ++below;
  });
  const double T = config.horizon();
  ErgodicAverages out;
  out.mean_f = sum_f * config.dt / T;
  out.mean_f2 = sum_f2 * config.dt / T;
  out.martingale = sum_f_dw / T;
  out.occupancy_lower_half =
      static_cast<double>(below) / static_cast<double>(config.n_steps);
  return out;
}

double martingale_average(const ReflectedPath& path, const DriftSpec& drift) {
  if (!path.has_noise_increments()) {
    throw ConfigError("martingale_average: path carries no noise increments");
  }
  const auto n = static_cast<std::size_t>(path.n_steps());
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += drift.eval(path.states[i]) * path.dW[i];
  }
  return acc / path.horizon();
}

std::string summary_csv(const McSummary& summary) {
  std::ostringstream out;
  out << "drift,theta0,barrier_kind,n,dt,T,N,bias,std_dev,mse,ci_coverage,ks_stat,dropped\n";
  for (const auto& c : summary.cells) {
    out << c.drift << ',' << format_double(c.theta0) << ',' << barrier_kind_name(c.kind)
        << ',' << c.n << ',' << format_double(c.dt) << ',' << format_double(c.T) << ','
        << c.replicates << ',' << format_double(c.bias) << ',' << format_double(c.std_dev)
        << ',' << format_double(c.mse) << ',' << format_double(c.ci_coverage) << ','
        << format_double(c.ks_stat) << ',' << c.dropped << '\n';
  }
  return out.str();
}

}  // namespace refsde
