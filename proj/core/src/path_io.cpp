#include "refsde/path_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "refsde/errors.hpp"
#include "refsde/format.hpp"

namespace refsde {

namespace {

constexpr double kTol = 1e-12;

std::map<std::string, std::string> parse_header_pairs(const std::string& line,
                                                      const std::string& origin) {
  std::map<std::string, std::string> pairs;
  std::istringstream in(line.substr(1));  // past '#'
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ": malformed header token \"" + token + "\"");
    }
    pairs[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return pairs;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

std::string path_to_csv(const ReflectedPath& path) {
  const SimConfig& c = path.config;
  std::ostringstream out;
  out << "# drift=" << c.drift.name << " theta=" << format_double(c.theta)
      << " sigma=" << format_double(c.sigma) << " lower=" << format_double(c.barriers.lower)
      << " upper=" << (c.barriers.two_sided() ? format_double(*c.barriers.upper) : "none")
      << " x0=" << format_double(c.x0) << " dt=" << format_double(c.dt)
      << " n_steps=" << c.n_steps << " seed=" << c.rng_seed
      << " scheme=" << scheme_name(c.scheme)
      << " overshoot_steps=" << path.overshoot_steps << '\n';
  out << "t,x,dL_cum,dR_cum\n";
  for (std::size_t i = 0; i < path.states.size(); ++i) {
    out << format_double(path.times[i]) << ',' << format_double(path.states[i]) << ','
        << format_double(path.l_cum[i]) << ',' << format_double(path.r_cum[i]) << '\n';
  }
  return out.str();
}

void save_path_csv(const ReflectedPath& path, const std::string& file) {
  std::ofstream out(file);
  if (!out) {
    throw ConfigError("cannot open \"" + file + "\" for writing");
  }
  out << path_to_csv(path);
  if (!out) {
    throw ConfigError("failed while writing \"" + file + "\"");
  }
}

ReflectedPath path_from_csv(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#') {
    throw ConfigError(origin + ": missing \"# key=value\" header line");
  }
  const auto header = parse_header_pairs(line, origin);

  auto required = [&](const char* key) -> const std::string& {
    const auto it = header.find(key);
    if (it == header.end()) {
      throw ConfigError(origin + ": header is missing required key \"" +
                        std::string(key) + "\"");
    }
    return it->second;
  };
  auto optional = [&](const char* key, const std::string& fallback) {
    const auto it = header.find(key);
    return it == header.end() ? fallback : it->second;
  };

  SimConfig config;
  config.drift = builtin_drift(required("drift"));
  config.barriers.lower = parse_double(required("lower"));
  const std::string upper = optional("upper", "none");
  if (upper != "none") config.barriers.upper = parse_double(upper);
  config.dt = parse_double(required("dt"));
  config.theta = parse_double(optional("theta", "0"));
  const std::string sigma = optional("sigma", "");
  config.sigma = sigma.empty() ? std::numeric_limits<double>::quiet_NaN()
                               : parse_double(sigma);
  config.rng_seed = header.count("seed")
                        ? std::stoull(header.at("seed"))
                        : 0;
  config.scheme = scheme_from_name(optional("scheme", "projection"));
  config.barriers.validate();
  if (!(config.dt > 0.0)) {
    throw ConfigError(origin + ": header dt must be positive");
  }

  if (!std::getline(in, line) || line != "t,x,dL_cum,dR_cum") {
    throw ConfigError(origin + ": expected column header \"t,x,dL_cum,dR_cum\"");
  }

  ReflectedPath path;
  int line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_row(line);
    if (fields.size() != 4) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected 4 fields, got " + std::to_string(fields.size()));
    }
    path.times.push_back(parse_double(fields[0]));
    path.states.push_back(parse_double(fields[1]));
    path.l_cum.push_back(parse_double(fields[2]));
    path.r_cum.push_back(parse_double(fields[3]));
  }
  if (path.states.size() < 2) {
    throw ConfigError(origin + ": path needs at least two grid points");
  }
  const std::size_t n = path.states.size() - 1;
  if (header.count("n_steps")) {
    const auto declared = static_cast<std::size_t>(std::stoull(header.at("n_steps")));
    if (declared != n) {
      throw ConfigError(origin + ": header n_steps=" + header.at("n_steps") +
                        " does not match " + std::to_string(n) + " data rows");
    }
  }
  config.n_steps = static_cast<std::int64_t>(n);
  config.x0 = path.states.front();
  if (header.count("overshoot_steps")) {
    path.overshoot_steps = std::stoll(header.at("overshoot_steps"));
  }
  path.config = config;
  path.dL.resize(n);
  path.dR.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    path.dL[i] = path.l_cum[i + 1] - path.l_cum[i];
    path.dR[i] = path.r_cum[i + 1] - path.r_cum[i];
  }

  // Structural validation; data rows are 1-based lines, row k holds state k-3.
  const BarrierConfig& barriers = config.barriers;
  auto row_of_state = [](std::size_t state_index) {
    return state_index + 3;
  };
  if (path.l_cum.front() != 0.0 || path.r_cum.front() != 0.0) {
    throw InvariantViolation(origin + ": row 3: cumulative regulators must start at 0");
  }
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = path.states[i];
    if (x < barriers.lower || (barriers.two_sided() && x > *barriers.upper)) {
      std::ostringstream msg;
      msg << origin << ": row " << row_of_state(i) << ": state " << format_double(x)
          << " lies outside the barrier interval";
      throw InvariantViolation(msg.str());
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (path.dL[i] < 0.0 || path.dR[i] < 0.0) {
      std::ostringstream msg;
      msg << origin << ": row " << row_of_state(i + 1)
          << ": cumulative regulator decreased";
      throw InvariantViolation(msg.str());
    }
    if (config.scheme == Scheme::projection) {
      if (path.dL[i] > kTol && std::abs(path.states[i + 1] - barriers.lower) > kTol) {
        std::ostringstream msg;
        msg << origin << ": row " << row_of_state(i + 1) << ": dL = "
            << format_double(path.dL[i]) << " but the state is interior "
            << "(complementarity violated)";
        throw InvariantViolation(msg.str());
      }
      if (path.dR[i] > kTol &&
          (!barriers.two_sided() || std::abs(path.states[i + 1] - *barriers.upper) > kTol)) {
        std::ostringstream msg;
        msg << origin << ": row " << row_of_state(i + 1) << ": dR = "
            << format_double(path.dR[i]) << " but the state is not at the upper barrier "
            << "(complementarity violated)";
        throw InvariantViolation(msg.str());
      }
    }
  }
  return path;
}

ReflectedPath load_path_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) {
    throw ConfigError("cannot open \"" + file + "\"");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return path_from_csv(buf.str(), file);
}

}  // namespace refsde
