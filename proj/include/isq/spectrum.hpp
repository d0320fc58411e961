#pragma once

// Spectral condition F(lambda) = sqrt(hbar/(m omega)) (c1 - c2)/L with
// F(lambda) = Gamma((c1-lambda)/2)/Gamma((c2-lambda)/2) * Gamma(c2)/Gamma(c1);
// energies are E = lambda hbar omega.

#include <string>
#include <utility>
#include <vector>

#include "isq/model.hpp"

namespace isq {

struct SpectralFunctionValue {
  double lambda = 0.0;
  double value = 0.0;  ///< +-inf at a pole
  bool is_pole = false;
  bool is_zero = false;
};

SpectralFunctionValue spectral_function(double lambda, const Exponents& exps);

enum class Branch { plus, minus };
std::string to_string(Branch b);

struct SpectrumResult {
  Branch branch = Branch::plus;
  double L = 0.0;
  double target = 0.0;
  std::vector<double> levels;  ///< ascending, n = 0..n_max
};

class RootCountError : public std::runtime_error {
 public:
  RootCountError(const std::string& what, double lo, double hi, int count)
      : std::runtime_error(what), lo(lo), hi(hi), count(count) {}
  double lo;
  double hi;
  int count;
};

/// Right-hand side sqrt(hbar/(m omega)) (c1 - c2)/L (0 for L = inf, +inf for L = 0).
double spectral_target(const Exponents& exps, double L, const PhysicalParams& params);

struct SpectrumOptions {
  double lambda_floor = -40.0;    ///< lowest lambda searched for finite L
  int scan_points = 10000;        ///< sign-change scan per bracketing interval
};

/// Levels lambda_0 < ... < lambda_{n_max} of one branch. L = inf and L = 0
/// give the closed-form ladders 2n + c2 and 2n + c1; otherwise one root per
/// interval between consecutive poles of F is located by a sign-change scan
/// and refined by bisection to machine precision. The search window is
/// [lambda_floor, 2 n_max + 4]; roots below the floor are not reported.
SpectrumResult solve_spectrum(const Exponents& exps, double L, int n_max, const PhysicalParams& params,
                              Branch branch = Branch::plus, const SpectrumOptions& options = {});

struct SpectralFamily {
  SpectrumResult plus;
  SpectrumResult minus;
  /// Index pairs (i in plus, j in minus) whose levels agree within 1e-9.
  std::vector<std::pair<int, int>> degenerate;
};

SpectralFamily spectral_family(const BoundaryData& bd, const Exponents& exps, int n_max,
                               const PhysicalParams& params, const SpectrumOptions& options = {});

}  // namespace isq
