#include "refsde/manifest.hpp"

#include <ctime>
#include <fstream>
#include <nlohmann/json.hpp>

#include "refsde/errors.hpp"

namespace refsde {

std::string utc_timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string manifest_to_json(const RunManifest& manifest) {
  nlohmann::json j;
  j["tool_version"] = manifest.tool_version;
  j["config_digest"] = manifest.config_digest;
  j["timestamp"] = manifest.timestamp_utc;
  j["outputs"] = manifest.outputs;
  return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::string& file) {
  std::ofstream out(file);
  if (!out) {
    throw ConfigError("cannot open \"" + file + "\" for writing");
  }
  out << manifest_to_json(manifest);
}

}  // namespace refsde
