#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "config.hpp"
#include "doctest.h"
#include "tasks.hpp"

using namespace isq;
using namespace isq::app;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("isq_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const json& doc) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << doc.dump();
  return p;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "isq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config defaults") {
  const RunConfig cfg = parse_config(json::object());
  CHECK(cfg.task == "selftest");
  CHECK(cfg.params.g == 5.0 / 32.0);
  CHECK(cfg.is_sigma1());
  CHECK(cfg.profile == Profile::strict);
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_WITH_AS(parse_config(json{{"mass", 1.0}}), "unknown key 'mass'", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(json{{"spectrum", {{"nmax", 3}}}}), "unknown key 'spectrum.nmax'", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(json{{"evolve", {{"grid", {{"step", 0.1}}}}}}), "unknown key 'evolve.grid.step'",
                       ConfigError);
}

TEST_CASE("config type and value errors") {
  CHECK_THROWS_AS(parse_config(json{{"m", "heavy"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"seed", -3}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"g", 0.1}, {"a", 0.7}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"tolerance_profile", "loose"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"U", "sigma3"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"U", {1, 2, 3}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
  RunConfig bad = parse_config(json{{"g", 1.0}});
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad = parse_config(json{{"task", "plot"}});
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad = parse_config(json{{"U", {{2, 0}, {0, 0}, {0, 0}, {1, 0}}}});
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
}

TEST_CASE("U keywords and matrices") {
  CHECK(parse_config(json{{"U", "minus_identity"}}).U.isApprox(-Matrix2c::Identity()));
  CHECK(parse_config(json{{"U", "identity"}}).U.isApprox(Matrix2c::Identity()));
  const RunConfig d = parse_config(json{{"U", "diag:1.0,-0.5"}});
  CHECK(d.U.isApprox(diagonal_unitary(1.0, -0.5)));
  const RunConfig m = parse_config(json{{"U", {{0, 0}, {1, 0}, {1, 0}, {0, 0}}}});
  CHECK(m.is_sigma1());
  CHECK(m.U_spec == "matrix");
  const RunConfig c = parse_config(json{{"U", {{0, 0}, {0, -1}, {0, 1}, {0, 0}}}});
  CHECK(c.U(0, 1) == cplx(0.0, -1.0));
  CHECK_FALSE(c.is_sigma1());
}

TEST_CASE("exponent given directly") {
  const RunConfig cfg = parse_config(json{{"a", 0.75}, {"m", 2.0}});
  CHECK(std::abs(exponents_from_coupling(cfg.params).a - 0.75) < 1e-14);
}

TEST_CASE("resolved config carries every setting") {
  const json r = resolved_config(parse_config(json{{"task", "spectrum"}}));
  for (const char* key : {"m", "omega", "hbar", "g", "U", "L0", "task", "seed", "tolerance_profile", "classical",
                          "spectrum", "eigenstates", "kernel", "evolve", "copy-demo"}) {
    CHECK(r.contains(key));
  }
  CHECK(r["derived"]["a"].get<double>() == doctest::Approx(0.75));
  // The resolved form is itself a valid config once the derived block is dropped.
  json again = r;
  again.erase("derived");
  again.erase("U_spec");
  json round = resolved_config(parse_config(again));
  CHECK(round["U_spec"] == "matrix");
  round["U_spec"] = r["U_spec"];
  CHECK(round == r);
}

TEST_CASE("shortest round-trip number formatting") {
  CHECK(format_number(0.25) == "0.25");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-300) == "1e-300");
  for (double v : {kPi, 1.0 / 3.0, -2.718281828459045, 6.02214076e23}) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("exit code 1 for invalid configuration") {
  const fs::path dir = scratch("invalid");
  CHECK(run({"--config", (dir / "missing.json").string()}).code == kExitInvalidConfig);
  std::ofstream(dir / "broken.json") << "{\"m\": 1,";
  CHECK(run({"--config", (dir / "broken.json").string()}).code == kExitInvalidConfig);
  const Run unknown = run({"--config", write_config(dir, json{{"colour", "red"}}).string()});
  CHECK(unknown.code == kExitInvalidConfig);
  CHECK(unknown.err.find("colour") != std::string::npos);
  CHECK(run({"--task", "plot"}).code == kExitInvalidConfig);
  CHECK(run({"--tolerance-profile", "loose"}).code == kExitInvalidConfig);
  CHECK(run({"--bogus"}).code == kExitInvalidConfig);
  const Run kernel = run({"--config", write_config(dir, json{{"U", "identity"}, {"task", "kernel"}}).string(), "--out",
                          dir.string()});
  CHECK(kernel.code == kExitInvalidConfig);
}

TEST_CASE("spectrum task writes the interleaved ladder") {
  const fs::path dir = scratch("spectrum");
  const Run r = run({"--task", "spectrum", "--out", dir.string()});
  REQUIRE(r.code == kExitOk);
  const json doc = json::parse(slurp(dir / "spectrum.json"));
  CHECK(doc["config"]["task"] == "spectrum");
  const double expected[] = {0.25, 1.75, 2.25, 3.75, 4.25, 5.75};
  for (int i = 0; i < 6; ++i) CHECK(doc["levels"][i]["lambda"].get<double>() == expected[i]);
  CHECK(doc["levels"].size() == 12);
}

TEST_CASE("CSV outputs start with the resolved config") {
  const fs::path dir = scratch("classical");
  const fs::path cfg = write_config(dir, json{{"task", "classical"}, {"classical", {{"t_end", 1.0}, {"dt", 0.25}}}});
  REQUIRE(run({"--config", cfg.string(), "--out", dir.string()}).code == kExitOk);
  std::ifstream in(dir / "classical.csv");
  std::string line;
  std::getline(in, line);
  REQUIRE(line.rfind("# config: ", 0) == 0);
  const json header = json::parse(line.substr(10));
  CHECK(header["classical"]["dt"].get<double>() == 0.25);
  CHECK(header["out"] == dir.string());
  std::getline(in, line);
  CHECK(line == "t,x,E");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("outputs are byte-identical for the same config and seed") {
  const fs::path dir = scratch("determinism");
  const fs::path cfg = write_config(
      dir, json{{"task", "kernel"}, {"kernel", {{"random_tuples", 4}, {"compare", true}}}});
  REQUIRE(run({"--config", cfg.string(), "--out", dir.string(), "--seed", "7"}).code == kExitOk);
  const std::string first = slurp(dir / "kernel.csv");
  REQUIRE(run({"--config", cfg.string(), "--out", dir.string(), "--seed", "7"}).code == kExitOk);
  CHECK(slurp(dir / "kernel.csv") == first);
  REQUIRE(run({"--config", cfg.string(), "--out", dir.string(), "--seed", "8"}).code == kExitOk);
  CHECK(slurp(dir / "kernel.csv") != first);
}

TEST_CASE("kernel rows at caustic times give the delta weights") {
  const fs::path dir = scratch("caustic");
  const fs::path cfg =
      write_config(dir, json{{"task", "kernel"}, {"kernel", {{"tuples", {{1.0, 0.5, kPi}, {1.0, 0.5, 1.0}}}}}});
  REQUIRE(run({"--config", cfg.string(), "--out", dir.string()}).code == kExitOk);
  const std::string csv = slurp(dir / "kernel.csv");
  CHECK(csv.find("caustic_same_side") != std::string::npos);
  CHECK(csv.find("caustic_mirror") != std::string::npos);
  CHECK(csv.find(",closed") != std::string::npos);
}

TEST_CASE("exit code 2 names the failing numerical check") {
  const fs::path dir = scratch("numerical");
  // A huge damping start ruins the epsilon extrapolation of the spectral sum.
  const fs::path cfg = write_config(
      dir, json{{"task", "kernel"}, {"kernel", {{"tuples", {{1.0, 0.7, 1.1}}}, {"compare", true}, {"epsilon", 2.0}}}});
  const Run r = run({"--config", cfg.string(), "--out", dir.string()});
  CHECK(r.code == kExitNumericalFailure);
  CHECK(r.err.find("kernel.closed_vs_spectral") != std::string::npos);
  // An expansion too short for the packet fails the truncation check.
  const fs::path cfg2 = write_config(dir, json{{"task", "evolve"}, {"evolve", {{"n_max", 3}}}});
  const Run t = run({"--config", cfg2.string(), "--out", dir.string()});
  CHECK(t.code == kExitNumericalFailure);
  CHECK(t.err.find("evolve.truncation_residual") != std::string::npos);
}

TEST_CASE("eigenstates task for a generic boundary condition") {
  const fs::path dir = scratch("eigenstates");
  const fs::path cfg = write_config(
      dir, json{{"task", "eigenstates"}, {"U", "diag:1.0,-0.5"}, {"eigenstates", {{"n_max", 1}, {"grid", {{"points", 10}}}}}});
  const Run r = run({"--config", cfg.string(), "--out", dir.string(), "--tolerance-profile", "fast"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("eigenstates.norm") != std::string::npos);
}

TEST_CASE("evolve task with explicit coefficients") {
  const fs::path dir = scratch("evolve");
  const fs::path cfg = write_config(
      dir, json{{"task", "evolve"},
                {"evolve", {{"packet", {{"type", "coefficients"}, {"c1", {{0.6, 0.0}}}, {"c2", {{0.0, 0.8}}}}},
                            {"times", {0.0, 1.0}},
                            {"grid", {{"points", 4}}}}}});
  REQUIRE(run({"--config", cfg.string(), "--out", dir.string()}).code == kExitOk);
  std::ifstream in(dir / "evolve.csv");
  std::string line;
  int rows = -2;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 8);
}
