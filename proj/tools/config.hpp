#pragma once

// Run configuration for the isq command line: JSON schema validation with
// unknown-key rejection, defaults, and the fully resolved form written into
// every output header.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isq/model.hpp"

namespace isq::app {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Profile { strict, fast };

std::string to_string(Profile p);
Profile profile_from_string(const std::string& s);

const std::vector<std::string>& task_names();

struct ClassicalOptions {
  double energy = 2.0;
  double t0 = 0.0;
  int sign = 1;
  double t_end = kPi;
  double dt = 1e-3;
};

struct SpectrumOptions {
  int n_max = 5;
  std::optional<double> L;  ///< single branch with this extension length instead of the U family
};

struct GridOptions {
  double x_min = -5.0;
  double x_max = 5.0;
  int points = 200;  ///< even, so the default grid skips x = 0
};

struct EigenstatesOptions {
  int n_max = 3;
  GridOptions grid;
};

struct KernelOptions {
  std::vector<std::array<double, 3>> tuples;  ///< (x_f, x_i, T); empty: `random_tuples` drawn from the seed
  int random_tuples = 10;
  bool compare = false;
  double epsilon = 0.0;  ///< <= 0: automatic Richardson start
};

struct PacketSpec {
  std::string type = "gaussian";  ///< "gaussian" or "coefficients"
  double center = 2.0;
  double width = 0.5;
  std::vector<cplx> c1;
  std::vector<cplx> c2;
};

struct EvolveOptions {
  PacketSpec packet;
  int n_max = 80;
  std::vector<double> times{0.0, kPi / 2.0, kPi};
  GridOptions grid;
};

struct CopyDemoOptions {
  std::vector<int> k{1, 2};
  double center = 2.0;
  double width = 0.5;
  int n_max = 80;
  int frames = 4;  ///< snapshots per k, at T = j k pi/(omega frames), j = 0..frames
  GridOptions grid;
};

struct RunConfig {
  PhysicalParams params{1.0, 1.0, 1.0, 5.0 / 32.0};
  CouplingMode mode = CouplingMode::tunneling;
  std::string U_spec = "sigma1";  ///< keyword as given, or "matrix"
  Matrix2c U = pauli_sigma1();
  double L0 = 1.0;
  std::string task = "selftest";
  std::string out = ".";
  std::uint64_t seed = 0;
  Profile profile = Profile::strict;

  ClassicalOptions classical;
  SpectrumOptions spectrum;
  EigenstatesOptions eigenstates;
  KernelOptions kernel;
  EvolveOptions evolve;
  CopyDemoOptions copy_demo;

  bool is_sigma1() const;
};

/// Parses and validates a config document. Throws ConfigError naming the
/// offending key for unknown keys, wrong types or invalid values.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads a JSON file and parses it.
RunConfig load_config(const std::string& path);

/// Checks that apply after command-line overrides (task name, physical
/// window, unitarity of U). Throws ConfigError.
void validate_config(const RunConfig& cfg);

/// Every setting with defaults filled in, plus the derived exponents.
nlohmann::json resolved_config(const RunConfig& cfg);

}  // namespace isq::app
