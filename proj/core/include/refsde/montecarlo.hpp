#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "refsde/estimate.hpp"
#include "refsde/simulate.hpp"

namespace refsde {

enum class BarrierKind { two_sided, one_sided };

std::string barrier_kind_name(BarrierKind k);
BarrierKind barrier_kind_from_name(const std::string& name);

struct ExperimentConfig {
  std::string drift_name;
  double theta0 = 0.0;
  double sigma = 1.0;
  BarrierConfig barriers;            // upper required for two_sided runs
  std::optional<double> x0;          // default: midpoint (two-sided), lower+1 (one-sided)
  std::vector<int> n_list;           // strictly increasing step counts
  double dt = 0.1;
  int replicates = 0;
  std::uint64_t base_seed = 0;
  double ci_level = 0.95;
  std::vector<BarrierKind> kinds;    // default: both when upper present, else one_sided
  Scheme scheme = Scheme::projection;
  int threads = 1;

  void validate() const;
  double x0_for(BarrierKind kind) const;
  std::vector<BarrierKind> effective_kinds() const;
};

/// One summary row: estimator statistics over the replicates of a single
/// (n, barrier-kind) cell.
struct McCell {
  std::string drift;
  double theta0 = 0.0;
  BarrierKind kind = BarrierKind::two_sided;
  int n = 0;
  double dt = 0.0;
  double T = 0.0;
  int replicates = 0;      // configured N
  double bias = 0.0;
  double std_dev = 0.0;    // (N-1) sample convention
  double mse = 0.0;        // mean of (theta_hat - theta0)^2
  double ci_coverage = 0.0;
  double ks_stat = 0.0;    // standardized errors vs standard normal
  int dropped = 0;         // replicates lost to degenerate denominators
  bool flagged = false;    // more than 1% dropped
  double F_used = 0.0;     // F used for standardization
  bool F_from_quadrature = false;
};

struct McSummary {
  std::vector<McCell> cells;
  /// Parallel to `cells` when run_experiment is asked to keep estimates.
  std::vector<std::vector<EstimateResult>> estimates;
};

/// Simulate-estimate over all (kind, n, replicate) combinations. Replicate r
/// uses seed base_seed + r (common random numbers across cells), executes in
/// a fixed-partition thread pool, and is reduced in replicate order, so the
/// summary is deterministic for a given config regardless of thread count.
/// Degenerate replicates are dropped and counted; cells losing more than 1%
/// are flagged.
///
/// Standardized errors use the quadrature F of the selected sign convention
/// when that density exists; otherwise (one-sided non-integrable
/// configurations) the mean plug-in F over replicates is used and the cell
/// records F_from_quadrature = false.
McSummary run_experiment(const ExperimentConfig& config, bool keep_estimates = false);

/// Kolmogorov-Smirnov distance of z_r = sqrt(T)(theta_hat_r - theta0) sqrt(F)/sigma
/// against the standard normal CDF. Requires at least 100 estimates sharing
/// a common horizon T.
double normality_diagnostic(const std::vector<EstimateResult>& estimates, double theta0,
                            double F, double sigma);

/// |time-average of f^2 along the path - F_quadrature| / F_quadrature.
/// Requires T >= 1000.
double ergodic_diagnostic(const ReflectedPath& path, const DriftSpec& drift,
                          double F_quadrature);

/// Streaming time averages over one simulated trajectory, O(1) memory, so
/// horizons far beyond what a stored path can hold stay cheap. Uses the
/// same draw sequence as simulate() for the same config.
struct ErgodicAverages {
  double mean_f = 0.0;         // (1/T) Σ f(X_i) dt
  double mean_f2 = 0.0;        // (1/T) Σ f^2(X_i) dt
  double martingale = 0.0;     // (1/T) Σ f(X_i) dW_i
  double occupancy_lower_half = 0.0;  // fraction of time in [l, midpoint]
};
ErgodicAverages simulate_ergodic_averages(const SimConfig& config);

/// Mean over steps of f(X_i) dW_i divided by T (the martingale term of the
/// estimator error, scaled); used by the diagnostics and tests.
double martingale_average(const ReflectedPath& path, const DriftSpec& drift);

/// Deterministic CSV rendering of a summary:
/// drift,theta0,barrier_kind,n,dt,T,N,bias,std_dev,mse,ci_coverage,ks_stat,dropped
std::string summary_csv(const McSummary& summary);

}  // namespace refsde
