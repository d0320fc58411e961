#pragma once

// Physical parameters, derived exponents and U(2) boundary data for the
// harmonic oscillator with an inverse-square potential on the punctured line.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace isq {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

constexpr double kPi = 3.141592653589793238462643383279502884;

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// H = p^2/2m + m omega^2 x^2/2 + g/x^2.
struct PhysicalParams {
  double m = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
  double g = 5.0 / 32.0;

  /// kappa = sqrt(m omega / hbar), so that y = kappa x is dimensionless.
  double kappa() const;
  /// sqrt(hbar / (m omega)).
  double length_scale() const;
  /// 3 hbar^2 / (8 m): upper end of the tunneling window.
  double critical_coupling() const;
};

/// Admissible range of g. `tunneling`: 0 < g < 3hbar^2/8m.
/// `limit_test`: 0 <= g <= 3hbar^2/8m (harmonic and conventional limits).
enum class CouplingMode { tunneling, limit_test };

struct Exponents {
  double a = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Throws InvalidParameter for non-positive m, omega, hbar or a g outside the
/// window of the given mode.
void validate(const PhysicalParams& params, CouplingMode mode = CouplingMode::tunneling);

/// a = sqrt(1 + 8 m g / hbar^2)/2, c1 = 1 + a, c2 = 1 - a.
Exponents exponents_from_coupling(const PhysicalParams& params, CouplingMode mode = CouplingMode::tunneling);

/// Inverse map: the coupling that produces exponent a for the given m, hbar.
double coupling_for_exponent(double a, const PhysicalParams& params);

/// A characteristic matrix U = V^{-1} diag(e^{i theta+}, e^{i theta-}) V with
/// extension lengths L+- = L0 cot(theta+-/2).
struct BoundaryData {
  Matrix2c U = Matrix2c::Identity();
  double theta_plus = 0.0;
  double theta_minus = 0.0;
  Matrix2c V = Matrix2c::Identity();
  double L0 = 1.0;
  double L_plus = 0.0;
  double L_minus = 0.0;

  bool degenerate() const;
  /// V^{-1} D V rebuilt from the stored decomposition.
  Matrix2c recompose() const;
};

/// max-norm of U^dagger U - I.
double unitarity_defect(const Matrix2c& U);

/// L0 cot(theta/2) with theta = 0 (mod 2 pi) -> +inf and theta = pi -> 0 exactly.
double extension_length(double theta, double L0);

/// Eigen-decomposition of a unitary 2x2 matrix. theta+ belongs to the
/// eigenvector with the larger first-component magnitude (ties: smaller
/// phase first); V is special unitary with V(0,0) real non-negative; U
/// proportional to the identity gives V = I.
BoundaryData decompose_unitary(const Matrix2c& U, double L0 = 1.0);

Matrix2c pauli_sigma1();
Matrix2c diagonal_unitary(double theta_plus, double theta_minus);

/// Parses "minus_identity", "sigma1", "identity" or "diag:t+,t-".
Matrix2c unitary_from_keyword(const std::string& keyword);

}  // namespace isq
