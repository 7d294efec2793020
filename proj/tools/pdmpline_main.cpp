// pdmpline: Monte Carlo driver for the production line with workload-dependent
// machine failures.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pdmpline/config.hpp"
#include "pdmpline/errors.hpp"
#include "pdmpline/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Production line with workload-dependent random machine failures"};
  app.set_version_flag("--version", pdmpline::version());

  std::string config_path;
  std::string preset;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> thin;
  bool single = false;
  bool w0_zero = false;

  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--preset", preset, "Compiled-in experiment (paper-g1, paper-g2)");
  app.add_option("--samples", samples, "Number of Monte Carlo samples");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--workers", workers, "Worker threads");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--thin", thin, "Output stride in time steps");
  app.add_flag("--single-trajectory", single, "Write one sample path and its jump log");
  app.add_flag("--w0-zero", w0_zero, "Start from zero workload instead of the initial WIP");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  pdmpline::RunConfig config;
  try {
    if (!config_path.empty() && !preset.empty()) {
      // Preset supplies defaults, the file overrides them.
      auto doc = nlohmann::json::parse(std::ifstream(config_path));
      doc["preset"] = preset;
      config = pdmpline::config_from_json(doc);
    } else if (!config_path.empty()) {
      config = pdmpline::load_config(config_path);
    } else if (!preset.empty()) {
      config = pdmpline::preset_config(preset);
    } else {
      std::cerr << "error: one of --config or --preset is required\n";
      return kExitConfig;
    }
    if (samples) config.n_samples = *samples;
    if (seed) config.master_seed = *seed;
    if (workers) config.workers = *workers;
    if (out_dir) config.output_dir = *out_dir;
    if (thin) config.output_thinning = *thin;
    if (w0_zero) config.scenario.w0 = 0.0;
    config.validate();
  } catch (const pdmpline::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const auto mode =
        single ? pdmpline::RunMode::single_trajectory : pdmpline::RunMode::ensemble;
    const auto dir = pdmpline::execute(config, mode);
    std::cout << "wrote " << dir.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
