#include "cli.hpp"

#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "isq/dynamics.hpp"
#include "isq/propagator.hpp"
#include "isq/specfun.hpp"
#include "isq/spectrum.hpp"
#include "tasks.hpp"

namespace isq::app {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Harmonic oscillator with an inverse-square potential on the punctured line"};
  std::string config_path;
  std::string task;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string profile;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--task", task, "task to run (overrides the config)");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--seed", seed, "seed for randomized samples (overrides the config)");
  app.add_option("--tolerance-profile", profile, "strict or fast (overrides the config)")
      ->check(CLI::IsMember({"strict", "fast"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!task.empty()) cfg.task = task;
    if (!out_dir.empty()) cfg.out = out_dir;
    if (seed) cfg.seed = *seed;
    if (!profile.empty()) cfg.profile = profile_from_string(profile);
    validate_config(cfg);
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  }

  try {
    for (const std::string& path : run_task(cfg, out)) out << "wrote " << path << '\n';
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const InvalidParameter& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const NumericalCheckError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  } catch (const TruncationError& e) {
    err << "numerical failure: check 'truncation' failed: " << e.what() << '\n';
    return kExitNumericalFailure;
  } catch (const RootCountError& e) {
    err << "numerical failure: check 'root_count' failed: " << e.what() << '\n';
    return kExitNumericalFailure;
  } catch (const specfun::ConvergenceError& e) {
    err << "numerical failure: check 'convergence' failed: " << e.what() << '\n';
    return kExitNumericalFailure;
  } catch (const CausticTimeError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "invalid config: output directory: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericalFailure;
  }
  return kExitOk;
}

}  // namespace isq::app
