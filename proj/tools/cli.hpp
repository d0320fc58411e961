#pragma once

// Command-line front end: flag parsing, config loading and exit codes
// (0 success, 1 invalid configuration, 2 numerical check failure).

#include <ostream>

namespace isq::app {

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 1;
constexpr int kExitNumericalFailure = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isq::app
