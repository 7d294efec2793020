#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdmpline/model.hpp"

namespace pdmpline {

struct RunConfig {
  Scenario scenario;
  std::size_t n_samples = 1000;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  std::string output_dir = "out";
  std::size_t output_thinning = 1;
  std::optional<std::string> preset;

  /// Scenario constraints plus the run fields. Throws ConfigError.
  void validate() const;
};

/// Names accepted by preset_config.
std::vector<std::string> preset_names();

/// Compiled-in experiment: v=1 on (0,1), c=2, dx=dt=0.1, T=50, repair rate 2,
/// failure rate in [0.1, 2] with theta=(0.1, 5), empty line, machine up.
/// "paper-g1" feeds 0.5, "paper-g2" feeds 1.5. Throws ConfigError otherwise.
RunConfig preset_config(std::string_view name);

/// Parses a JSON document. A "preset" key supplies defaults that the other
/// keys override; unknown keys are rejected with their path. A top-level
/// "run_info" object (written to meta.json) is ignored.
RunConfig config_from_json(const nlohmann::json& doc);

/// Fully resolved document that config_from_json maps back to `config`.
nlohmann::json config_to_json(const RunConfig& config);

/// Reads and parses `path`. Throws ConfigError on I/O, syntax or validation
/// failure.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace pdmpline
