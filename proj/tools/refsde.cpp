#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "refsde/config.hpp"
#include "refsde/errors.hpp"
#include "refsde/estimate.hpp"
#include "refsde/format.hpp"
#include "refsde/invariant.hpp"
#include "refsde/manifest.hpp"
#include "refsde/montecarlo.hpp"
#include "refsde/path_io.hpp"
#include "refsde/simulate.hpp"
#include "refsde/version.hpp"

namespace fs = std::filesystem;
using namespace refsde;

namespace {

struct GlobalOptions {
  std::optional<std::uint64_t> seed;  // overrides config seeds
  std::optional<int> threads;
  std::string out;
};

int resolve_threads(const GlobalOptions& global) {
  if (global.threads) return std::max(1, *global.threads);
  if (const char* env = std::getenv("REFSDE_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw ConfigError(std::string("REFSDE_THREADS is not an integer: \"") + env + "\"");
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void write_manifest_for(const std::string& digest, const std::vector<std::string>& outputs,
                        const std::string& file) {
  RunManifest manifest;
  manifest.tool_version = kVersion;
  manifest.config_digest = digest;
  manifest.timestamp_utc = utc_timestamp_now();
  manifest.outputs = outputs;
  write_manifest(manifest, file);
}

int cmd_simulate(const GlobalOptions& global, const std::string& config_file) {
  if (global.out.empty()) {
    throw ConfigError("simulate: --out <path.csv> is required");
  }
  SimConfig config = load_sim_config_file(config_file);
  if (global.seed) config.rng_seed = *global.seed;
  const ReflectedPath path = simulate(config);
  save_path_csv(path, global.out);
  write_manifest_for(content_digest(canonical_text(config)), {global.out},
                     global.out + ".manifest.json");
  if (path.overshoot_steps > 0) {
    std::cerr << "warning: " << path.overshoot_steps
              << " steps overshot past the far barrier by more than the barrier "
                 "width; consider a smaller dt\n";
  }
  if (path.lepingle_fallback) {
    std::cerr << "note: lepingle scheme applies to one-sided domains only; "
                 "two-sided simulation used projection\n";
  }
  return kExitOk;
}

int cmd_estimate(const std::string& path_file, std::optional<double> sigma,
                 const std::string& method, double ci_level, bool reconstruct,
                 bool print_header) {
  const ReflectedPath path = load_path_csv(path_file);
  EstimateOptions options;
  options.method = method_from_name(method);
  options.ci_level = ci_level;
  options.reconstruct_regulators = reconstruct;
  if (sigma) {
    options.sigma = *sigma;
  } else if (std::isfinite(path.config.sigma)) {
    options.sigma = path.config.sigma;
  } else {
    std::cerr << "warning: sigma not given and absent from the path header; "
                 "using the quadratic-variation plug-in\n";
  }
  const EstimateResult result = estimate(path, path.config.drift, options);
  if (print_header) std::cout << estimate_csv_header() << '\n';
  std::cout << estimate_csv_row(result) << '\n';
  return kExitOk;
}

int cmd_montecarlo(const GlobalOptions& global, const std::string& config_file,
                   std::string out_dir, bool keep_replicates) {
  if (out_dir.empty()) out_dir = global.out;
  if (out_dir.empty()) {
    throw ConfigError("montecarlo: --out-dir <directory> is required");
  }
  ExperimentConfig config = load_experiment_config_file(config_file);
  if (global.seed) config.base_seed = *global.seed;
  config.threads = resolve_threads(global);

  const McSummary summary = run_experiment(config, keep_replicates);

  fs::create_directories(out_dir);
  std::vector<std::string> outputs;
  const std::string summary_file = (fs::path(out_dir) / "summary.csv").string();
  {
    std::ofstream out(summary_file);
    if (!out) throw ConfigError("cannot open \"" + summary_file + "\" for writing");
    out << summary_csv(summary);
  }
  outputs.push_back(summary_file);

  if (keep_replicates) {
    for (std::size_t i = 0; i < summary.cells.size(); ++i) {
      const McCell& cell = summary.cells[i];
      std::ostringstream name;
      name << "estimates_" << cell.drift << '_' << barrier_kind_name(cell.kind) << "_n"
           << cell.n << ".csv";
      const std::string file = (fs::path(out_dir) / name.str()).string();
      std::ofstream out(file);
      if (!out) throw ConfigError("cannot open \"" + file + "\" for writing");
      out << estimate_csv_header() << '\n';
      for (const auto& r : summary.estimates[i]) {
        out << estimate_csv_row(r) << '\n';
      }
      outputs.push_back(file);
    }
  }

  write_manifest_for(content_digest(canonical_text(config)), outputs,
                     (fs::path(out_dir) / "manifest.json").string());

  for (const auto& cell : summary.cells) {
    if (cell.flagged) {
      std::cerr << "warning: " << cell.drift << '/' << barrier_kind_name(cell.kind)
                << " n=" << cell.n << ": " << cell.dropped << '/' << cell.replicates
                << " replicates dropped (degenerate denominators)\n";
    }
  }
  return kExitOk;
}

int cmd_density(const GlobalOptions& global, const std::string& config_file, int grid,
                bool both_conventions) {
  if (grid < 1) {
    throw ConfigError("density: --grid must be >= 1");
  }
  const DensityRequest request = load_density_config_file(config_file);
  const DriftSpec drift = builtin_drift(request.drift_name);

  std::ostringstream body;
  if (!both_conventions) {
    const int sign = request.sign_convention.value_or(kDefaultSignConvention);
    const InvariantDensity density(drift, request.theta, request.sigma, request.barriers,
                                   sign);
    body << "# sign_convention=" << sign << " normalizer="
         << format_double(density.normalizer()) << '\n';
    body << "x,pi\n";
    const double lo = request.barriers.lower;
    const double hi = density.upper_effective();
    if (grid == 1) {
      const double x = lo + 0.5 * (hi - lo);
      body << format_double(x) << ',' << format_double(density.pdf(x)) << '\n';
    } else {
      const double h = (hi - lo) / (grid - 1);
      for (int i = 0; i < grid; ++i) {
        const double x = lo + i * h;
        body << format_double(x) << ',' << format_double(density.pdf(x)) << '\n';
      }
    }
  } else {
    // Histogram-oracle verdict plus both conventions side by side.
    SimConfig oracle;
    oracle.drift = drift;
    oracle.theta = request.theta;
    oracle.sigma = request.sigma;
    oracle.barriers = request.barriers;
    oracle.x0 = request.barriers.two_sided()
                    ? request.barriers.lower + 0.5 * request.barriers.width()
                    : request.barriers.lower + 1.0;
    oracle.dt = 1e-3;
    oracle.n_steps = 5000000;
    oracle.rng_seed = global.seed.value_or(2024);
    const SignSelection verdict = select_sign_convention(
        drift, request.theta, request.sigma, request.barriers, oracle);
    body << "# selected=" << verdict.selected
         << " ks_minus=" << format_double(verdict.ks_minus)
         << " ks_plus=" << format_double(verdict.ks_plus) << '\n';

    auto make = [&](int sign) -> std::optional<InvariantDensity> {
      try {
        return InvariantDensity(drift, request.theta, request.sigma, request.barriers,
                                sign);
      } catch (const NumericalError&) {
        return std::nullopt;
      }
    };
    const auto minus = make(-1);
    const auto plus = make(+1);
    const double lo = request.barriers.lower;
    double hi = 0.0;
    if (minus) hi = std::max(hi, minus->upper_effective());
    if (plus) hi = std::max(hi, plus->upper_effective());
    body << "x,pi_minus,pi_plus\n";
    auto row = [&](double x) {
      body << format_double(x) << ','
           << format_double(minus ? minus->pdf(x) : std::nan("")) << ','
           << format_double(plus ? plus->pdf(x) : std::nan("")) << '\n';
    };
    if (grid == 1) {
      row(lo + 0.5 * (hi - lo));
    } else {
      const double h = (hi - lo) / (grid - 1);
      for (int i = 0; i < grid; ++i) row(lo + i * h);
    }
  }

  if (global.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(global.out);
    if (!out) throw ConfigError("cannot open \"" + global.out + "\" for writing");
    out << body.str();
    write_manifest_for(content_digest(canonical_text(request)), {global.out},
                       global.out + ".manifest.json");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflected-SDE simulation, drift estimation and Monte-Carlo experiments"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOptions global;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Override the config seed");
  int threads_value = 0;
  auto* threads_opt =
      app.add_option("--threads", threads_value,
                     "Worker threads for montecarlo (default: REFSDE_THREADS or all cores)");
  app.add_option("--out", global.out, "Output file (simulate, density) or directory");

  std::string config_file;
  std::string path_file;
  std::string out_dir;
  std::string method = "MLE";
  double ci_level = 0.95;
  std::optional<double> sigma;
  double sigma_value = 0.0;
  bool keep_replicates = false;
  bool reconstruct = false;
  bool print_header = false;
  bool both_conventions = false;
  int grid = 512;

  auto* sim = app.add_subcommand("simulate", "Simulate one reflected path to CSV");
  sim->add_option("--config", config_file, "Config file with a [simulate] section")
      ->required();

  auto* est = app.add_subcommand("estimate", "Estimate theta from a path CSV");
  est->add_option("--path", path_file, "Path CSV produced by simulate")->required();
  auto* sigma_opt = est->add_option("--sigma", sigma_value, "Known diffusion coefficient");
  est->add_option("--method", method, "MLE or LSE (labels the result row)");
  est->add_option("--ci", ci_level, "Confidence level in (0,1), default 0.95");
  est->add_flag("--reconstruct-regulators", reconstruct,
                "Rebuild regulator increments from states alone (minimal reconstruction)");
  est->add_flag("--header", print_header, "Print the CSV header line first");

  auto* mc = app.add_subcommand("montecarlo", "Replicated simulate-estimate experiment");
  mc->add_option("--config", config_file, "Config file with an [experiment] section")
      ->required();
  mc->add_option("--out-dir", out_dir, "Output directory for summary.csv + manifest");
  mc->add_flag("--keep-replicates", keep_replicates,
               "Also write per-replicate estimate CSVs");

  auto* den = app.add_subcommand("density", "Emit the stationary density on a grid");
  den->add_option("--config", config_file, "Config file with a [density] section")
      ->required();
  den->add_option("--grid", grid, "Number of grid points (default 512)");
  den->add_flag("--both-conventions", both_conventions,
                "Emit both exponent signs plus the histogram-oracle verdict");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitConfig;
  }

  if (*seed_opt) global.seed = seed_value;
  if (*threads_opt) global.threads = threads_value;
  if (*sigma_opt) sigma = sigma_value;

  try {
    if (sim->parsed()) return cmd_simulate(global, config_file);
    if (est->parsed()) {
      return cmd_estimate(path_file, sigma, method, ci_level, reconstruct, print_header);
    }
    if (mc->parsed()) return cmd_montecarlo(global, config_file, out_dir, keep_replicates);
    if (den->parsed()) return cmd_density(global, config_file, grid, both_conventions);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
