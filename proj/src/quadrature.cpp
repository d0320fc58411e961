#include "isq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace isq::quad {

namespace {

constexpr double kHalfPi = 1.5707963267948966192313216916397514;

// Appends the tanh-sinh nodes with t = k h, k odd if `odd_only`.
void append_nodes(double a, double b, double h, double t_max, bool odd_only, Rule& r) {
  const double half = 0.5 * (b - a);
  const int k_max = static_cast<int>(std::ceil(t_max / h));
  for (int k = -k_max; k <= k_max; ++k) {
    if (odd_only && (k % 2 == 0)) continue;
    const double t = k * h;
    const double u = kHalfPi * std::sinh(t);
    const double cu = std::cosh(u);
    const double w = h * kHalfPi * std::cosh(t) / (cu * cu) * half;
    // Distance from the nearer end: half * (1 - tanh|u|) = half * 2 / (e^{2|u|} + 1).
    const double d = half * 2.0 / (std::exp(2.0 * std::abs(u)) + 1.0);
    if (d == 0.0 || w == 0.0) continue;
    r.nodes.push_back(t < 0.0 ? a + d : b - d);
    r.weights.push_back(w);
  }
}

}  // namespace

Rule tanh_sinh(double a, double b, int level, double t_max) {
  if (!(b > a)) throw std::invalid_argument("tanh_sinh: need b > a");
  Rule r;
  append_nodes(a, b, std::ldexp(1.0, -level), t_max, false, r);
  return r;
}

Rule half_line_rule(double x_max, double panel, int level, int first_level) {
  if (!(x_max > 0.0) || !(panel > 0.0)) throw std::invalid_argument("half_line_rule: need positive extent");
  Rule r;
  double a = 0.0;
  bool first = true;
  while (a < x_max) {
    const double b = std::min(a + panel, x_max);
    const Rule p = first ? tanh_sinh(a, b, first_level, 4.5) : tanh_sinh(a, b, level, 3.2);
    r.nodes.insert(r.nodes.end(), p.nodes.begin(), p.nodes.end());
    r.weights.insert(r.weights.end(), p.weights.begin(), p.weights.end());
    a = b;
    first = false;
  }
  return r;
}

std::complex<double> integrate(const std::function<std::complex<double>(double)>& f, double a, double b,
                               double abs_tol) {
  if (!(b > a)) throw std::invalid_argument("integrate: need b > a");
  constexpr double t_max = 4.5;
  double h = 0.5;
  // Level 1: all nodes k h. Subsequent levels add the odd multiples of h/2.
  std::complex<double> sum = 0.0;
  Rule r0;
  append_nodes(a, b, h, t_max, false, r0);
  for (std::size_t i = 0; i < r0.size(); ++i) sum += r0.weights[i] * f(r0.nodes[i]);
  std::complex<double> prev = sum;
  for (int level = 2; level <= 12; ++level) {
    Rule r;
    append_nodes(a, b, 0.5 * h, t_max, true, r);
    std::complex<double> added = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) added += r.weights[i] * f(r.nodes[i]);
    // Weights of the new rule are half of the old ones for shared nodes.
    const std::complex<double> cur = 0.5 * prev + added;
    h *= 0.5;
    if (level >= 4 && std::abs(cur - prev) <= std::max(abs_tol, 1e-14 * std::abs(cur))) return cur;
    prev = cur;
  }
  throw std::runtime_error("integrate: tanh-sinh refinement did not reach tolerance " + std::to_string(abs_tol));
}

}  // namespace isq::quad
