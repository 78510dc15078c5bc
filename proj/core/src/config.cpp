#include "refsde/config.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <vector>

#include "refsde/errors.hpp"
#include "refsde/format.hpp"

namespace refsde {

namespace {

using json = nlohmann::json;

struct Entry {
  json value;
  int line = 0;
};

struct ParsedConfig {
  std::string origin;
  std::map<std::string, std::map<std::string, Entry>> sections;
};

// '#' begins a comment unless it sits inside a double-quoted JSON string.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (c == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

ParsedConfig parse_config(const std::string& text, const std::string& origin) {
  ParsedConfig out;
  out.origin = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": malformed section header \"" + line + "\"");
      }
      section = trim(line.substr(1, line.size() - 2));
      out.sections[section];  // sections may be empty
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected key = value, got \"" + line + "\"");
    }
    if (section.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": key outside any [section]");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value_text = trim(line.substr(eq + 1));
    if (key.empty() || value_text.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": empty key or value");
    }
    json value;
    try {
      value = json::parse(value_text);
    } catch (const json::parse_error& e) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": field \"" + key +
                        "\": value is not valid JSON (" + e.what() + ")");
    }
    auto& sec = out.sections[section];
    if (sec.count(key)) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key \"" +
                        key + "\" (first at line " + std::to_string(sec[key].line) + ")");
    }
    sec[key] = Entry{std::move(value), line_no};
  }
  return out;
}

class SectionReader {
 public:
  SectionReader(const ParsedConfig& config, const std::string& section)
      : origin_(config.origin), section_(section) {
    const auto it = config.sections.find(section);
    if (it == config.sections.end()) {
      throw ConfigError(origin_ + ": missing required section [" + section + "]");
    }
    entries_ = &it->second;
    for (const auto& other : config.sections) {
      if (other.first != section) {
        throw ConfigError(origin_ + ": unexpected section [" + other.first +
                          "]; this command reads only [" + section + "]");
      }
    }
  }

  ~SectionReader() = default;

  /// Call after reading everything; any untouched key is an error.
  void finish() const {
    for (const auto& [key, entry] : *entries_) {
      if (!consumed_.count(key)) {
        throw ConfigError(origin_ + ":" + std::to_string(entry.line) +
                          ": unknown key \"" + key + "\" in [" + section_ + "]");
      }
    }
  }

  bool has(const std::string& key) const { return entries_->count(key) > 0; }

  const json& require(const std::string& key) {
    const auto it = entries_->find(key);
    if (it == entries_->end()) {
      throw ConfigError(origin_ + ": [" + section_ + "] is missing required key \"" +
                        key + "\"");
    }
    consumed_.insert(key);
    return it->second.value;
  }

  const json* optional(const std::string& key) {
    const auto it = entries_->find(key);
    if (it == entries_->end()) return nullptr;
    consumed_.insert(key);
    return &it->second.value;
  }

  double number(const std::string& key) { return as_number(key, require(key)); }

  double number_or(const std::string& key, double fallback) {
    const json* v = optional(key);
    return v ? as_number(key, *v) : fallback;
  }

  std::string string(const std::string& key) { return as_string(key, require(key)); }

  std::string string_or(const std::string& key, const std::string& fallback) {
    const json* v = optional(key);
    return v ? as_string(key, *v) : fallback;
  }

  std::int64_t integer(const std::string& key) { return as_integer(key, require(key)); }

  std::uint64_t unsigned_integer(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(key, "a nonnegative integer", v);
    }
    return v.get<std::uint64_t>();
  }

  double as_number(const std::string& key, const json& v) const {
    if (!v.is_number()) fail(key, "a number", v);
    return v.get<double>();
  }

  std::string as_string(const std::string& key, const json& v) const {
    if (!v.is_string()) fail(key, "a string", v);
    return v.get<std::string>();
  }

  std::int64_t as_integer(const std::string& key, const json& v) const {
    if (!v.is_number_integer() && !v.is_number_unsigned()) fail(key, "an integer", v);
    return v.get<std::int64_t>();
  }

  [[noreturn]] void fail(const std::string& key, const char* expected, const json& v) const {
    throw ConfigError(origin_ + ": [" + section_ + "] key \"" + key + "\": expected " +
                      expected + ", got " + v.dump());
  }

  const std::string& origin() const { return origin_; }
  const std::string& section() const { return section_; }

 private:
  std::string origin_;
  std::string section_;
  const std::map<std::string, Entry>* entries_ = nullptr;
  std::set<std::string> consumed_;
};

std::string read_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) {
    throw ConfigError("cannot open config file \"" + file + "\"");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

BarrierConfig read_barriers(SectionReader& reader) {
  BarrierConfig barriers;
  barriers.lower = reader.number("lower");
  if (const json* upper = reader.optional("upper")) {
    barriers.upper = reader.as_number("upper", *upper);
  }
  barriers.validate();
  return barriers;
}

}  // namespace

SimConfig load_sim_config_string(const std::string& text, const std::string& origin) {
  const ParsedConfig parsed = parse_config(text, origin);
  SectionReader reader(parsed, "simulate");
  SimConfig config;
  config.drift = builtin_drift(reader.string("drift"));
  config.theta = reader.number("theta");
  config.sigma = reader.number("sigma");
  config.barriers = read_barriers(reader);
  config.x0 = reader.number("x0");
  config.dt = reader.number("dt");
  config.n_steps = reader.integer("n_steps");
  config.rng_seed = reader.unsigned_integer("seed");
  config.scheme = scheme_from_name(reader.string_or("scheme", "projection"));
  reader.finish();
  config.validate();
  return config;
}

SimConfig load_sim_config_file(const std::string& file) {
  return load_sim_config_string(read_file(file), file);
}

ExperimentConfig load_experiment_config_string(const std::string& text,
                                               const std::string& origin) {
  const ParsedConfig parsed = parse_config(text, origin);
  SectionReader reader(parsed, "experiment");
  ExperimentConfig config;
  config.drift_name = reader.string("drift");
  config.theta0 = reader.number("theta0");
  config.sigma = reader.number("sigma");
  config.barriers = read_barriers(reader);
  if (const json* x0 = reader.optional("x0")) {
    config.x0 = reader.as_number("x0", *x0);
  }
  const json& n_list = reader.require("n_list");
  if (!n_list.is_array() || n_list.empty()) {
    reader.fail("n_list", "a nonempty array of integers", n_list);
  }
  for (const auto& item : n_list) {
    config.n_list.push_back(static_cast<int>(reader.as_integer("n_list", item)));
  }
  config.dt = reader.number("dt");
  config.replicates = static_cast<int>(reader.integer("replicates"));
  config.base_seed = reader.unsigned_integer("base_seed");
  config.ci_level = reader.number_or("ci_level", 0.95);
  if (const json* kinds = reader.optional("barrier_kinds")) {
    if (!kinds->is_array() || kinds->empty()) {
      reader.fail("barrier_kinds", "a nonempty array of strings", *kinds);
    }
    for (const auto& item : *kinds) {
      config.kinds.push_back(
          barrier_kind_from_name(reader.as_string("barrier_kinds", item)));
    }
  }
  config.scheme = scheme_from_name(reader.string_or("scheme", "projection"));
  reader.finish();
  config.validate();
  return config;
}

ExperimentConfig load_experiment_config_file(const std::string& file) {
  return load_experiment_config_string(read_file(file), file);
}

DensityRequest load_density_config_string(const std::string& text,
                                          const std::string& origin) {
  const ParsedConfig parsed = parse_config(text, origin);
  SectionReader reader(parsed, "density");
  DensityRequest request;
  request.drift_name = reader.string("drift");
  builtin_drift(request.drift_name);  // raises on unknown names
  request.theta = reader.number("theta");
  request.sigma = reader.number("sigma");
  request.barriers = read_barriers(reader);
  if (const json* sign = reader.optional("sign_convention")) {
    const auto s = static_cast<int>(reader.as_integer("sign_convention", *sign));
    if (s != 1 && s != -1) {
      reader.fail("sign_convention", "+1 or -1", *sign);
    }
    request.sign_convention = s;
  }
  reader.finish();
  if (!(request.sigma > 0.0)) {
    throw ConfigError(origin + ": [density] sigma must be positive");
  }
  return request;
}

DensityRequest load_density_config_file(const std::string& file) {
  return load_density_config_string(read_file(file), file);
}

std::string canonical_text(const SimConfig& config) {
  std::ostringstream out;
  out << "simulate drift=" << config.drift.name << " theta=" << format_double(config.theta)
      << " sigma=" << format_double(config.sigma)
      << " lower=" << format_double(config.barriers.lower) << " upper="
      << (config.barriers.two_sided() ? format_double(*config.barriers.upper) : "none")
      << " x0=" << format_double(config.x0) << " dt=" << format_double(config.dt)
      << " n_steps=" << config.n_steps << " seed=" << config.rng_seed
      << " scheme=" << scheme_name(config.scheme);
  return out.str();
}

std::string canonical_text(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "experiment drift=" << config.drift_name
      << " theta0=" << format_double(config.theta0)
      << " sigma=" << format_double(config.sigma)
      << " lower=" << format_double(config.barriers.lower) << " upper="
      << (config.barriers.two_sided() ? format_double(*config.barriers.upper) : "none")
      << " x0=" << (config.x0 ? format_double(*config.x0) : "auto") << " n_list=[";
  for (std::size_t i = 0; i < config.n_list.size(); ++i) {
    out << (i ? "," : "") << config.n_list[i];
  }
  out << "] dt=" << format_double(config.dt) << " replicates=" << config.replicates
      << " base_seed=" << config.base_seed
      << " ci_level=" << format_double(config.ci_level) << " kinds=[";
  const auto kinds = config.effective_kinds();
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    out << (i ? "," : "") << barrier_kind_name(kinds[i]);
  }
  out << "] scheme=" << scheme_name(config.scheme);
  return out.str();
}

std::string canonical_text(const DensityRequest& request) {
  std::ostringstream out;
  out << "density drift=" << request.drift_name
      << " theta=" << format_double(request.theta)
      << " sigma=" << format_double(request.sigma)
      << " lower=" << format_double(request.barriers.lower) << " upper="
      << (request.barriers.two_sided() ? format_double(*request.barriers.upper) : "none")
      << " sign_convention="
      << (request.sign_convention ? std::to_string(*request.sign_convention) : "auto");
  return out.str();
}

std::string content_digest(const std::string& canonical) {
  std::uint64_t hash = 14695981039346656037ull;
  for (const unsigned char c : canonical) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << hash;
  return out.str();
}

}  // namespace refsde
