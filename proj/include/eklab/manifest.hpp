#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace eklab::cli {

[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

/// Every file a run emits, plus what is needed to re-run it.
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> argv;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  double wall_seconds = 0.0;
  std::vector<std::filesystem::path> outputs;

  /// Digests are taken relative to `base` when the output lies under it.
  [[nodiscard]] nlohmann::ordered_json to_json(const std::filesystem::path& base) const;
  void write(const std::filesystem::path& path) const;
};

[[nodiscard]] std::string tool_version();

}  // namespace eklab::cli
