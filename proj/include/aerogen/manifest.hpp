#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace aerogen {

std::string sha256_hex(const void* data, size_t len);
std::string sha256_file(const std::string& path);

struct FileRecord {
  std::string path;  // relative to the output directory
  std::string hash;
};

struct StageRecord {
  std::string name;
  std::vector<FileRecord> inputs, outputs;
  double seconds = 0.0;
};

// Run manifest: config snapshot, per-stage hashes + timings, warnings, audit.
struct RunManifest {
  nlohmann::json config_snapshot;
  std::vector<StageRecord> stages;
  std::vector<std::string> warnings;
  nlohmann::json audit = nlohmann::json::object();

  void save(const std::string& path) const;
  static RunManifest load(const std::string& path);
};

}  // namespace aerogen
