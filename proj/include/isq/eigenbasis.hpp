#pragma once

// Eigenfunctions on the punctured line. On each half-line a state is a
// combination of the two local solutions
//   phi^(c)(x) = y^{c-1/2} e^{-y^2/2} M((c-lambda)/2, c; y^2),  y = kappa |x|,
// with c = c1 (kind 1) or c = c2 (kind 2); normalizability fixes the ratio
// N^(1)/N^(2) = -F(lambda) on both sides.

#include <functional>
#include <vector>

#include "isq/model.hpp"
#include "isq/quadrature.hpp"
#include "isq/spectrum.hpp"

namespace isq {

struct LocalSolution {
  int kind = 1;  ///< 1 -> c1, 2 -> c2
  double lambda = 0.0;
  Exponents exps;
};

/// phi^(kind)(x) for x > 0.
double local_solution_value(const LocalSolution& sol, double x, const PhysicalParams& params);
/// d phi^(kind)/dx for x > 0.
double local_solution_derivative(const LocalSolution& sol, double x, const PhysicalParams& params);

/// Real zero-energy solutions with unit Wronskian:
///   phi1(x) = sqrt(hbar/(m omega)) phi^(1)_{lambda=0}(|x|) sign(x),
///   phi2(x) = phi^(2)_{lambda=0}(|x|) / (c2 - c1).
struct ZeroModes {
  Exponents exps;
  PhysicalParams params;

  double phi1(double x) const;
  double phi2(double x) const;
  double dphi1(double x) const;
  double dphi2(double x) const;
};

ZeroModes zero_modes(const Exponents& exps, const PhysicalParams& params);

/// psi(x) = Theta(x)[N_R1 phi^(1) + N_R2 phi^(2)](|x|) + Theta(-x)[N_L1 phi^(1) + N_L2 phi^(2)](|x|).
struct Eigenstate {
  double lambda = 0.0;
  cplx N_R1 = 0.0;
  cplx N_R2 = 0.0;
  cplx N_L1 = 0.0;
  cplx N_L2 = 0.0;
  Exponents exps;
  PhysicalParams params;
  /// Labels of the closed-form sigma1 states (series 1 or 2, index n);
  /// series 0 marks a state assembled for a general U.
  int series = 0;
  int index = -1;

  cplx value(double x) const;
  cplx derivative(double x) const;
  double energy() const { return lambda * params.hbar * params.omega; }

  /// Coefficients of the decaying solution y^{c2-1/2} e^{-y^2/2} U((c2-lambda)/2, c2; y^2)
  /// on each side; set by finalize().
  cplx C_R = 0.0;
  cplx C_L = 0.0;
  /// Derives C_R, C_L from the N coefficients.
  void finalize();
};

struct BoundaryVectors {
  Vector2c Psi;
  Vector2c PsiPrime;
};

/// Psi = (c1 - c2)(N_R2, N_L2), Psi' = kappa (N_R1, N_L1).
BoundaryVectors boundary_vectors(const Eigenstate& psi);

/// The same vectors from Wronskians W[psi, phi_j](+-x) at x = 1e-4, 1e-5, 1e-6,
/// extrapolated to x -> 0 by eliminating the x^{2-2a} and x^2 corrections.
BoundaryVectors boundary_vectors_numeric(const Eigenstate& psi);

/// || (U - I) Psi + i L0 (U + I) Psi' ||.
double boundary_residual(const Eigenstate& psi, const BoundaryData& bd);

/// Builds the normalized eigenstate for a level of the given branch. The
/// boundary vector spans the kernel of L(U - I) - i L0 (U + I) (U - I for
/// L = inf, U + I for L = 0), found by SVD with rank threshold 1e-9. For
/// U proportional to I the kernel is two-dimensional and degenerate_index
/// selects the right- (0) or left- (1) supported member. Phase: N_R2 real
/// positive if non-zero, else N_R1, else N_L2, else N_L1.
Eigenstate assemble_eigenstate(double lambda, Branch branch, const BoundaryData& bd, const Exponents& exps,
                               const PhysicalParams& params, int degenerate_index = 0);

/// N^(s) = [kappa Gamma(n + c_s)/(Gamma(c_s)^2 n!)]^{1/2}.
double sigma1_normalization(int n, int s, const Exponents& exps, const PhysicalParams& params);

/// Closed-form eigenstate for U = sigma1: series 1 is odd (N_L1 = -N_R1),
/// series 2 even (N_L2 = N_R2), lambda = 2n + c_s. Series 2 is rejected at
/// a = 1, where c2 = 0.
Eigenstate sigma1_eigenstate(int n, int s, const Exponents& exps, const PhysicalParams& params);

/// Fast evaluation of all sigma1 states n = 0..n_max of both series at one
/// point by the normalized Laguerre recurrence:
///   psi_n^(s)(x) = sqrt(kappa) h_n(y^2) y^{c_s - 1/2} e^{-y^2/2}, odd for s = 1.
/// At a = 1 the series-2 functions are the limits of the formula: psi_0^(2)
/// vanishes and psi_n^(2), n >= 1, are the even states of energy 2n.
class Sigma1Basis {
 public:
  Sigma1Basis(const Exponents& exps, const PhysicalParams& params, int n_max);

  int n_max() const { return n_max_; }
  const Exponents& exponents() const { return exps_; }
  const PhysicalParams& params() const { return params_; }
  double level(int n, int s) const { return 2.0 * n + (s == 1 ? exps_.c1 : exps_.c2); }

  /// Fills psi1[n], psi2[n] for n = 0..n_max (vectors are resized).
  void evaluate(double x, std::vector<double>& psi1, std::vector<double>& psi2) const;
  /// Derivatives d/dx of the same functions.
  void evaluate_derivative(double x, std::vector<double>& dpsi1, std::vector<double>& dpsi2) const;

 private:
  Exponents exps_;
  PhysicalParams params_;
  int n_max_;
};

/// Outer quadrature cutoff max(8, 2 sqrt(lambda_max)) sqrt(hbar/(m omega)).
double quadrature_cutoff(const PhysicalParams& params, double lambda_max);

/// Fixed composite tanh-sinh rule on the full line (both half-lines,
/// nodes ordered by x) up to the cutoff for lambda_max.
quad::Rule line_rule(const PhysicalParams& params, double lambda_max);

/// Integral of conj(f) g over the punctured line, adaptive tanh-sinh on
/// panels of each half-line, absolute tolerance 1e-10.
cplx inner_product(const std::function<cplx(double)>& f, const std::function<cplx(double)>& g,
                   const PhysicalParams& params, double lambda_max = 0.0);

}  // namespace isq
