#include "isq/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace isq {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kAngleSnap = 1e-12;

double wrap_angle(double theta) {
  if (theta < 0.0) theta += kTwoPi;
  if (theta >= kTwoPi - kAngleSnap) theta = 0.0;
  return theta;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double PhysicalParams::kappa() const { return std::sqrt(m * omega / hbar); }

double PhysicalParams::length_scale() const { return std::sqrt(hbar / (m * omega)); }

double PhysicalParams::critical_coupling() const { return 3.0 * hbar * hbar / (8.0 * m); }

void validate(const PhysicalParams& params, CouplingMode mode) {
  if (!(params.m > 0.0) || !std::isfinite(params.m)) throw InvalidParameter("mass m must be positive and finite");
  if (!(params.omega > 0.0) || !std::isfinite(params.omega)) {
    throw InvalidParameter("frequency omega must be positive and finite");
  }
  if (!(params.hbar > 0.0) || !std::isfinite(params.hbar)) {
    throw InvalidParameter("hbar must be positive and finite");
  }
  const double g_crit = params.critical_coupling();
  if (!std::isfinite(params.g)) throw InvalidParameter("coupling g must be finite");
  if (mode == CouplingMode::tunneling) {
    if (!(params.g > 0.0 && params.g < g_crit)) {
      throw InvalidParameter("coupling g = " + format_double(params.g) + " outside the tunneling window (0, " +
                             format_double(g_crit) + "); use limit-test mode for the end points");
    }
  } else if (!(params.g >= 0.0 && params.g <= g_crit)) {
    throw InvalidParameter("coupling g = " + format_double(params.g) + " outside [0, " + format_double(g_crit) + "]");
  }
}

Exponents exponents_from_coupling(const PhysicalParams& params, CouplingMode mode) {
  validate(params, mode);
  const double a = 0.5 * std::sqrt(1.0 + 8.0 * params.m * params.g / (params.hbar * params.hbar));
  return {a, 1.0 + a, 1.0 - a};
}

double coupling_for_exponent(double a, const PhysicalParams& params) {
  if (!(a >= 0.5)) throw InvalidParameter("exponent a must be at least 1/2");
  return params.hbar * params.hbar * (4.0 * a * a - 1.0) / (8.0 * params.m);
}

bool BoundaryData::degenerate() const { return theta_plus == theta_minus; }

Matrix2c BoundaryData::recompose() const {
  Matrix2c d = Matrix2c::Zero();
  d(0, 0) = std::polar(1.0, theta_plus);
  d(1, 1) = std::polar(1.0, theta_minus);
  return V.adjoint() * d * V;
}

double unitarity_defect(const Matrix2c& U) {
  return (U.adjoint() * U - Matrix2c::Identity()).cwiseAbs().maxCoeff();
}

double extension_length(double theta, double L0) {
  const double t = wrap_angle(theta);
  if (t == 0.0) return std::numeric_limits<double>::infinity();
  if (std::abs(t - kPi) <= kAngleSnap) return 0.0;
  return L0 * std::cos(0.5 * t) / std::sin(0.5 * t);
}

BoundaryData decompose_unitary(const Matrix2c& U, double L0) {
  const double defect = unitarity_defect(U);
  if (!(defect <= 1e-12)) {
    throw InvalidParameter("characteristic matrix is not unitary: ||U^dagger U - I||_max = " + format_double(defect));
  }
  if (!(L0 > 0.0) || !std::isfinite(L0)) throw InvalidParameter("L0 must be positive and finite");

  BoundaryData bd;
  bd.U = U;
  bd.L0 = L0;

  const cplx tr = U.trace();
  const cplx det = U.determinant();
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  const cplx mu1 = 0.5 * (tr + disc);
  const cplx mu2 = 0.5 * (tr - disc);

  if (std::abs(mu1 - mu2) <= kAngleSnap) {
    const double theta = wrap_angle(std::arg(0.5 * tr));
    bd.theta_plus = bd.theta_minus = theta;
    bd.V = Matrix2c::Identity();
  } else {
    // Eigenvector of mu1 from whichever row of (U - mu1 I) is better conditioned.
    Vector2c v;
    if (std::abs(U(0, 1)) + std::abs(U(1, 0)) <= 1e-15) {
      v = std::abs(U(0, 0) - mu1) <= std::abs(U(1, 1) - mu1) ? Vector2c(1.0, 0.0) : Vector2c(0.0, 1.0);
    } else {
      const Vector2c r0(U(0, 1), mu1 - U(0, 0));
      const Vector2c r1(mu1 - U(1, 1), U(1, 0));
      v = r0.norm() >= r1.norm() ? r0 : r1;
    }
    v.normalize();
    const Vector2c w(-std::conj(v(1)), std::conj(v(0)));  // eigenvector of mu2

    double th1 = wrap_angle(std::arg(mu1));
    double th2 = wrap_angle(std::arg(mu2));
    const double m1 = std::abs(v(0));
    const double m2 = std::abs(w(0));
    bool first_is_plus;
    if (std::abs(m1 - m2) > 1e-12) {
      first_is_plus = m1 > m2;
    } else {
      first_is_plus = th1 <= th2;
    }
    Vector2c vp = first_is_plus ? v : w;
    bd.theta_plus = first_is_plus ? th1 : th2;
    bd.theta_minus = first_is_plus ? th2 : th1;
    if (std::abs(vp(0)) > 0.0) vp *= std::polar(1.0, -std::arg(vp(0)));
    // Rows of V are the conjugated eigenvectors; the second row is fixed so
    // that det V = 1.
    bd.V(0, 0) = std::conj(vp(0));
    bd.V(0, 1) = std::conj(vp(1));
    bd.V(1, 0) = -vp(1);
    bd.V(1, 1) = vp(0);
  }
  bd.L_plus = extension_length(bd.theta_plus, L0);
  bd.L_minus = extension_length(bd.theta_minus, L0);
  return bd;
}

Matrix2c pauli_sigma1() {
  Matrix2c s;
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

Matrix2c diagonal_unitary(double theta_plus, double theta_minus) {
  Matrix2c d = Matrix2c::Zero();
  d(0, 0) = std::polar(1.0, theta_plus);
  d(1, 1) = std::polar(1.0, theta_minus);
  return d;
}

Matrix2c unitary_from_keyword(const std::string& keyword) {
  if (keyword == "identity") return Matrix2c::Identity();
  if (keyword == "minus_identity") return -Matrix2c::Identity();
  if (keyword == "sigma1") return pauli_sigma1();
  if (keyword.rfind("diag:", 0) == 0) {
    const std::string body = keyword.substr(5);
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw InvalidParameter("diag keyword needs two angles: diag:theta+,theta-");
    auto parse = [&](const std::string& s) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception&) {
        throw InvalidParameter("cannot parse angle '" + s + "' in U keyword");
      }
      if (used != s.size() || !std::isfinite(v)) throw InvalidParameter("cannot parse angle '" + s + "' in U keyword");
      return v;
    };
    return diagonal_unitary(parse(body.substr(0, comma)), parse(body.substr(comma + 1)));
  }
  throw InvalidParameter("unknown U keyword '" + keyword + "'");
}

}  // namespace isq
