#pragma once

#include <string>
#include <vector>

namespace refsde {

/// Audit record written next to every produced artifact: which tool version
/// ran, the content digest of the resolved config, when, and what it wrote.
struct RunManifest {
  std::string tool_version;
  std::string config_digest;
  std::string timestamp_utc;  // ISO-8601, e.g. 2026-08-10T12:34:56Z
  std::vector<std::string> outputs;
};

std::string utc_timestamp_now();
std::string manifest_to_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::string& file);

}  // namespace refsde
