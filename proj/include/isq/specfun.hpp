#pragma once

// Special functions needed by the inverse-square oscillator: log-Gamma with
// sign tracking, Kummer M and Tricomi U, Laguerre and Hermite polynomials,
// Bessel J of real argument and modified Bessel I of complex argument.

#include <complex>
#include <stdexcept>
#include <vector>

namespace isq::specfun {

/// Gamma(x) in log-magnitude / sign form. At a pole `is_pole` is set and the
/// other fields are meaningless (log_abs = +inf, sign = 0).
struct GammaValue {
  double log_abs = 0.0;
  int sign = 1;
  bool is_pole = false;

  double value() const;
  /// 1/Gamma(x); zero at the poles.
  double reciprocal() const;
};

/// Lanczos approximation (g = 607/128) with reflection below 1/2.
GammaValue log_gamma(double x);

double sin_pi(double x);
double cos_pi(double x);

/// True if x lies within 1e-12 of a non-positive integer.
bool is_gamma_pole(double x);

/// A number stored as mantissa * exp(log_scale), used where e^z overflows.
struct ScaledValue {
  double mantissa = 0.0;
  double log_scale = 0.0;

  double value() const;
};

/// Kummer confluent hypergeometric M(alpha, gamma; z) for real z >= 0.
/// Compensated Maclaurin series when it does not cancel, the large-z
/// expansion when it is accurate, otherwise Taylor continuation of Kummer's
/// equation from a small z where the series is well conditioned.
ScaledValue kummer_m_scaled(double alpha, double gamma, double z);
double kummer_m(double alpha, double gamma, double z);

/// Tricomi U(alpha, gamma; z), z > 0, gamma not an integer. Asymptotic
/// series when accurate, otherwise the combination of two M functions when
/// it does not cancel, otherwise inward Taylor integration of Kummer's
/// equation from a point where the asymptotic series is accurate.
double tricomi_u(double alpha, double gamma, double z);

/// Associated Laguerre polynomial L_n^{(nu)}(z) by forward recurrence.
double laguerre(int n, double nu, double z);

/// Orthonormal Laguerre values h_k = sqrt(k!/Gamma(k+nu+1)) L_k^{(nu)}(z)
/// for k = 0..n_max. nu = -1 is allowed (then h_0 = 0).
std::vector<double> normalized_laguerre(int n_max, double nu, double z);

/// exp(log_weight) h_k for k = 0..n_max, with internal rescaling so that a
/// large weight and large h_k combine without overflow or underflow.
std::vector<double> normalized_laguerre_weighted(int n_max, double nu, double z, double log_weight);

/// Physicists' Hermite polynomial H_n(y).
double hermite(int n, double y);

/// Bessel J_nu(x) and Y_nu(x) for real x > 0 and any real nu.
struct BesselJY {
  double j = 0.0;
  double y = 0.0;
};
BesselJY bessel_jy(double nu, double x);
double bessel_j(double nu, double x);

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Modified Bessel I_nu(z), principal branch, nu in (-1, 2). Purely
/// imaginary arguments are routed through J_nu of real argument; otherwise
/// the ascending series is summed (at most 400 terms).
std::complex<double> bessel_i(double nu, std::complex<double> z);

/// The ascending series alone, exposed for cross-checks.
std::complex<double> bessel_i_series(double nu, std::complex<double> z);

}  // namespace isq::specfun
