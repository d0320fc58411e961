#pragma once

// The acceptance suite: ten numerical criteria with tolerances and runtime
// budgets. Shared by the `selftest` task and the acceptance test binary.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "config.hpp"

namespace isq::app {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  ///< measured quantity against its tolerance
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
};

const std::vector<Criterion>& acceptance_criteria();

/// Runs one criterion. The fast profile shrinks sample counts; tolerances
/// are the same in both profiles. A criterion also fails when it exceeds its
/// runtime budget or throws.
CheckResult run_criterion(int id, Profile profile, std::uint64_t seed);

/// Runs all criteria in order; `on_result` is called after each one.
std::vector<CheckResult> run_acceptance(Profile profile, std::uint64_t seed,
                                        const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace isq::app
