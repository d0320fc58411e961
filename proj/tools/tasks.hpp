#pragma once

// The command-line tasks. Each writes its artifacts into the configured
// output directory (CSV with a "# config:" header line, JSON with a "config"
// member) and throws NumericalCheckError when one of its checks fails.

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"

namespace isq::app {

class NumericalCheckError : public std::runtime_error {
 public:
  NumericalCheckError(const std::string& check, const std::string& detail)
      : std::runtime_error("check '" + check + "' failed: " + detail), check(check) {}
  std::string check;
};

/// Shortest decimal form that parses back to the same double.
std::string format_number(double v);

/// Runs cfg.task; progress and summaries go to `log`. Returns the paths of
/// the files written.
std::vector<std::string> run_task(const RunConfig& cfg, std::ostream& log);

}  // namespace isq::app
