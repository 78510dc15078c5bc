#pragma once

#include <optional>
#include <string>

#include "refsde/montecarlo.hpp"
#include "refsde/simulate.hpp"

namespace refsde {

/// Config files are flat key = value text grouped in [sections]; values use
/// JSON syntax (numbers, strings, booleans, arrays). '#' starts a comment.
/// Unknown sections or keys are hard errors carrying file:line, as are
/// duplicate keys.
///
/// [simulate]               [experiment]              [density]
///   drift    = "sin2pi"      drift     = "sin2pi"      drift  = "sin2pi"
///   theta    = 1.0           theta0    = 1.0           theta  = 1.0
///   sigma    = 2.0           sigma     = 2.0           sigma  = 2.0
///   lower    = 0.0           lower     = 0.0           lower  = 0.0
///   upper    = 3.0  # opt    upper     = 3.0  # opt    upper  = 3.0  # opt
///   x0       = 1.5           x0        = 1.5  # opt    sign_convention = -1  # opt
///   dt       = 0.1           n_list    = [100, 200, 500]
///   n_steps  = 500           dt        = 0.1
///   seed     = 42            replicates = 1000
///   scheme   = "projection"  base_seed = 42
///            # opt           ci_level  = 0.95  # opt
///                            barrier_kinds = ["two_sided", "one_sided"]  # opt
///                            scheme    = "projection"  # opt

SimConfig load_sim_config_file(const std::string& file);
SimConfig load_sim_config_string(const std::string& text, const std::string& origin);

ExperimentConfig load_experiment_config_file(const std::string& file);
ExperimentConfig load_experiment_config_string(const std::string& text,
                                               const std::string& origin);

struct DensityRequest {
  std::string drift_name;
  double theta = 0.0;
  double sigma = 1.0;
  BarrierConfig barriers;
  std::optional<int> sign_convention;  // default: the selected convention
};

DensityRequest load_density_config_file(const std::string& file);
DensityRequest load_density_config_string(const std::string& text,
                                          const std::string& origin);

/// Canonical one-line renderings of resolved configs (defaults applied,
/// fixed key order, 17-digit reals). Two config files that resolve to the
/// same settings share the same canonical text on every platform.
std::string canonical_text(const SimConfig& config);
std::string canonical_text(const ExperimentConfig& config);
std::string canonical_text(const DensityRequest& request);

/// FNV-1a 64-bit content hash, rendered as 16 hex digits.
std::string content_digest(const std::string& canonical);

}  // namespace refsde
