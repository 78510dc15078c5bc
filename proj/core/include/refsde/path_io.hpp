#pragma once

#include <string>

#include "refsde/simulate.hpp"

namespace refsde {

/// Path CSV layout: a "# key=value ..." comment line carrying the full sim
/// config, a column header, then one row per grid point:
///
///   t,x,dL_cum,dR_cum
///
/// All reals are written with 17 significant digits, so load(save(path))
/// reproduces every stored column bitwise.
std::string path_to_csv(const ReflectedPath& path);
void save_path_csv(const ReflectedPath& path, const std::string& file);

/// Parses and validates a path CSV. Structural invariants (states inside
/// the barriers, nonnegative nondecreasing regulators, complementarity for
/// projection-scheme paths) are enforced on load; violations raise
/// InvariantViolation naming the first offending row. Noise increments are
/// not stored, so the loaded path has an empty dW.
ReflectedPath load_path_csv(const std::string& file);
ReflectedPath path_from_csv(const std::string& text, const std::string& origin);

}  // namespace refsde
