#pragma once

// Feynman kernel for U = sigma1: closed Bessel form off caustic times, weights
// of the delta terms at caustic times T = k pi/omega, and the damped spectral
// sum over the sigma1 eigenbasis used as a cross-check.

#include "isq/eigenbasis.hpp"

namespace isq {

struct KernelRequest {
  double x_f = 1.0;
  double x_i = 1.0;
  double T = 1.0;
  double epsilon = 0.0;  ///< spectral path only: modes damped by exp(-lambda epsilon / 2)
  int n_max = -1;        ///< spectral path only: < 0 picks ceil(40/epsilon)
};

/// |sin(omega T)| below this routes to the caustic description.
constexpr double kCausticThreshold = 1e-9;

class CausticTimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// K(x_f, x_i; T) = m omega/(2 i hbar sin wT) |x_f x_i|^{1/2}
///   exp(i m omega cos wT (x_f^2 + x_i^2)/(2 hbar sin wT)) [I_{-a}(z) +- I_a(z)],
/// z = (m omega/(i hbar)) |x_f x_i|/sin wT, "+" on the same side, "-" across.
/// Powers z^{+-a} use the principal branch for 0 < wT < pi and are continued
/// through each caustic (T -> T - i0) beyond, which keeps K continuous with
/// the spectral sum at all off-caustic times.
cplx kernel_closed(const KernelRequest& req, const Exponents& exps, const PhysicalParams& params);

/// The closed form continued to complex magnitudes r_f = |x_f|, r_i = |x_i|
/// (arguments in [0, pi/2)), with r^{nu} continued from the positive axis.
/// Used to integrate along rotated rays.
cplx kernel_closed_complex(cplx r_f, cplx r_i, bool same_side, double T, const Exponents& exps,
                           const PhysicalParams& params);

/// Standard harmonic-oscillator (Mehler) kernel; principal branch of
/// (i sin wT)^{-1/2} for 0 < wT < pi, continued through the caustics beyond.
cplx mehler_kernel(double x_f, double x_i, double T, const PhysicalParams& params);

struct SpectralKernel {
  cplx value;
  double tail_estimate;  ///< geometric bound on the omitted modes
  int n_max;
};

/// sum_s sum_{n<=n_max} psi_n^(s)(x_f) psi_n^(s)(x_i) exp(-i lambda omega T - lambda epsilon/2).
SpectralKernel kernel_spectral(const KernelRequest& req, const Exponents& exps, const PhysicalParams& params);

/// Richardson extrapolation epsilon -> 0 from the three values at
/// epsilon, epsilon/2, epsilon/4 (errors assumed O(epsilon) + O(epsilon^2)).
cplx richardson_epsilon(const cplx& k_eps, const cplx& k_half, const cplx& k_quarter);

/// Spectral kernel extrapolated from epsilon in {e0, e0/2, e0/4}. A
/// non-positive e0 picks min(0.02, 0.05 sin^2(wT)/(kappa max(|x_f|, |x_i|, 1))^2).
cplx kernel_spectral_extrapolated(double x_f, double x_i, double T, const Exponents& exps,
                                  const PhysicalParams& params, double e0 = -1.0);

/// Weights of the caustic kernel at T = k pi/omega:
///   K = same_side delta(x_f - x_i) + mirror delta(x_f + x_i),
/// same_side = (-1)^k cos(a k pi), mirror = i (-1)^k sin(a k pi).
struct CausticWeights {
  int k = 1;
  cplx same_side;
  cplx mirror;
};

CausticWeights caustic_weights(int k, double a);

}  // namespace isq
