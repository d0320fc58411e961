#pragma once

// Double-exponential (tanh-sinh) quadrature on [0, X] split into panels.
// Nodes carry their distance from the left panel end computed without
// cancellation, so integrable endpoint singularities such as x^{-1/2} are
// resolved.

#include <complex>
#include <functional>
#include <vector>

namespace isq::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Tanh-sinh rule on [a, b] with step h = 2^{-level}, truncated at |t| <= t_max.
Rule tanh_sinh(double a, double b, int level, double t_max = 4.5);

/// Composite rule on (0, x_max]: panels of width `panel` (the last one may be
/// shorter). The panel touching the origin uses `first_level`, the others
/// `level`.
Rule half_line_rule(double x_max, double panel = 0.5, int level = 3, int first_level = 5);

/// Adaptive integral of f over [a, b]: halves the tanh-sinh step until two
/// successive estimates agree within max(abs_tol, 1e-14 |estimate|). Throws
/// std::runtime_error if level 12 is reached without agreement.
std::complex<double> integrate(const std::function<std::complex<double>(double)>& f, double a, double b,
                               double abs_tol);

}  // namespace isq::quad
