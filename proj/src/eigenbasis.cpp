#include "isq/eigenbasis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isq/specfun.hpp"

namespace isq {

namespace {

using specfun::GammaValue;
using specfun::log_gamma;

double exponent_of(int kind, const Exponents& exps) {
  if (kind == 1) return exps.c1;
  if (kind == 2) return exps.c2;
  throw InvalidParameter("local solution kind must be 1 or 2");
}

double gamma_value(double x) { return log_gamma(x).value(); }

void require_noninteger_c2(const Exponents& exps, const char* what) {
  if (specfun::is_gamma_pole(exps.c2)) {
    throw InvalidParameter(std::string(what) + ": general eigenstates need a non-integer c2 (a < 1)");
  }
}

// Decaying radial function R(y) = y^{c2-1/2} e^{-y^2/2} U((c2-lambda)/2, c2; y^2)
// and its y-derivative.
double decaying_value(double lambda, const Exponents& exps, double y) {
  const double z = y * y;
  const double u = specfun::tricomi_u(0.5 * (exps.c2 - lambda), exps.c2, z);
  return u * std::exp((exps.c2 - 0.5) * std::log(y) - 0.5 * z);
}

double decaying_derivative(double lambda, const Exponents& exps, double y) {
  const double z = y * y;
  const double alpha = 0.5 * (exps.c2 - lambda);
  const double q = exps.c2 - 0.5;
  const double u = specfun::tricomi_u(alpha, exps.c2, z);
  const double du = alpha == 0.0 ? 0.0 : -alpha * specfun::tricomi_u(alpha + 1.0, exps.c2 + 1.0, z);
  return std::exp(q * std::log(y) - 0.5 * z) * ((q / y - y) * u + 2.0 * y * du);
}

// Laguerre-route value and y-derivative of sqrt(n!/Gamma(n+c)) L_n^{(c-1)}(y^2) y^{c-1/2} e^{-y^2/2}.
struct LaguerreRadial {
  double value;
  double derivative;
};

LaguerreRadial laguerre_radial(int n, double c, double y) {
  const double z = y * y;
  const double q = c - 0.5;
  const std::vector<double> h = specfun::normalized_laguerre(n, c - 1.0, z);
  double dh = 0.0;
  if (n > 0) dh = -std::sqrt(static_cast<double>(n)) * specfun::normalized_laguerre(n - 1, c, z)[n - 1];
  const double env = std::exp(q * std::log(y) - 0.5 * z);
  return {h[n] * env, env * (2.0 * y * dh + (q / y - y) * h[n])};
}

// Solves W0 + A t^p + B t^2 = w_i for the three samples.
cplx extrapolate(const double t[3], const cplx w[3], double p) {
  Eigen::Matrix3cd m;
  Eigen::Vector3cd rhs;
  for (int i = 0; i < 3; ++i) {
    m(i, 0) = 1.0;
    m(i, 1) = std::pow(t[i], p);
    m(i, 2) = t[i] * t[i];
    rhs(i) = w[i];
  }
  return m.fullPivLu().solve(rhs)(0);
}

}  // namespace

double local_solution_value(const LocalSolution& sol, double x, const PhysicalParams& params) {
  if (!(x > 0.0)) throw InvalidParameter("local solutions are evaluated at x > 0");
  const double c = exponent_of(sol.kind, sol.exps);
  const double y = params.kappa() * x;
  const double z = y * y;
  const specfun::ScaledValue mv = specfun::kummer_m_scaled(0.5 * (c - sol.lambda), c, z);
  return mv.mantissa * std::exp(mv.log_scale - 0.5 * z + (c - 0.5) * std::log(y));
}

double local_solution_derivative(const LocalSolution& sol, double x, const PhysicalParams& params) {
  if (!(x > 0.0)) throw InvalidParameter("local solutions are evaluated at x > 0");
  const double c = exponent_of(sol.kind, sol.exps);
  const double kappa = params.kappa();
  const double y = kappa * x;
  const double z = y * y;
  const double alpha = 0.5 * (c - sol.lambda);
  const double q = c - 0.5;
  const specfun::ScaledValue m0 = specfun::kummer_m_scaled(alpha, c, z);
  const specfun::ScaledValue m1 = specfun::kummer_m_scaled(alpha + 1.0, c + 1.0, z);
  const double base = q * std::log(y) - 0.5 * z;
  const double t0 = (q / y - y) * m0.mantissa * std::exp(m0.log_scale + base);
  const double t1 = 2.0 * y * alpha / c * m1.mantissa * std::exp(m1.log_scale + base);
  return kappa * (t0 + t1);
}

double ZeroModes::phi1(double x) const {
  if (x == 0.0) throw InvalidParameter("zero modes are not evaluated at x = 0");
  const double v = params.length_scale() * local_solution_value({1, 0.0, exps}, std::abs(x), params);
  return x > 0.0 ? v : -v;
}

double ZeroModes::phi2(double x) const {
  if (x == 0.0) throw InvalidParameter("zero modes are not evaluated at x = 0");
  return local_solution_value({2, 0.0, exps}, std::abs(x), params) / (exps.c2 - exps.c1);
}

double ZeroModes::dphi1(double x) const {
  if (x == 0.0) throw InvalidParameter("zero modes are not evaluated at x = 0");
  // phi1 is odd, so its derivative is even.
  return params.length_scale() * local_solution_derivative({1, 0.0, exps}, std::abs(x), params);
}

double ZeroModes::dphi2(double x) const {
  if (x == 0.0) throw InvalidParameter("zero modes are not evaluated at x = 0");
  const double d = local_solution_derivative({2, 0.0, exps}, std::abs(x), params) / (exps.c2 - exps.c1);
  return x > 0.0 ? d : -d;
}

ZeroModes zero_modes(const Exponents& exps, const PhysicalParams& params) { return {exps, params}; }

void Eigenstate::finalize() {
  if (series != 0) return;
  require_noninteger_c2(exps, "Eigenstate");
  const GammaValue g_alpha1 = log_gamma(0.5 * (exps.c1 - lambda));
  const GammaValue g_alpha2 = log_gamma(0.5 * (exps.c2 - lambda));
  const double ga = gamma_value(exps.a);
  const double gma = gamma_value(-exps.a);
  // R = Gamma(a)/Gamma(alpha1) phi^(2) + Gamma(-a)/Gamma(alpha2) phi^(1).
  auto coefficient = [&](cplx n1, cplx n2) -> cplx {
    if (n2 != 0.0 && !g_alpha1.is_pole) return n2 * g_alpha1.value() / ga;
    if (n1 != 0.0 && !g_alpha2.is_pole) return n1 * g_alpha2.value() / gma;
    return 0.0;
  };
  C_R = coefficient(N_R1, N_R2);
  C_L = coefficient(N_L1, N_L2);
}

cplx Eigenstate::value(double x) const {
  if (x == 0.0) throw InvalidParameter("eigenstates are not evaluated at x = 0");
  const double y = params.kappa() * std::abs(x);
  if (series != 0) {
    const double c = series == 1 ? exps.c1 : exps.c2;
    const double r = std::sqrt(params.kappa()) * laguerre_radial(index, c, y).value;
    const cplx coeff = x > 0.0 ? (series == 1 ? N_R1 : N_R2) : (series == 1 ? N_L1 : N_L2);
    return coeff / sigma1_normalization(index, series, exps, params) * r;
  }
  const cplx coeff = x > 0.0 ? C_R : C_L;
  if (coeff == 0.0) return 0.0;
  return coeff * decaying_value(lambda, exps, y);
}

cplx Eigenstate::derivative(double x) const {
  if (x == 0.0) throw InvalidParameter("eigenstates are not evaluated at x = 0");
  const double kappa = params.kappa();
  const double y = kappa * std::abs(x);
  const double side = x > 0.0 ? 1.0 : -1.0;  // d|x|/dx
  if (series != 0) {
    const double c = series == 1 ? exps.c1 : exps.c2;
    const double r = std::sqrt(kappa) * kappa * laguerre_radial(index, c, y).derivative;
    const cplx coeff = x > 0.0 ? (series == 1 ? N_R1 : N_R2) : (series == 1 ? N_L1 : N_L2);
    return side * coeff / sigma1_normalization(index, series, exps, params) * r;
  }
  const cplx coeff = x > 0.0 ? C_R : C_L;
  if (coeff == 0.0) return 0.0;
  return side * kappa * coeff * decaying_derivative(lambda, exps, y);
}

BoundaryVectors boundary_vectors(const Eigenstate& psi) {
  const double two_a = psi.exps.c1 - psi.exps.c2;
  const double kappa = psi.params.kappa();
  return {Vector2c(two_a * psi.N_R2, two_a * psi.N_L2), Vector2c(kappa * psi.N_R1, kappa * psi.N_L1)};
}

BoundaryVectors boundary_vectors_numeric(const Eigenstate& psi) {
  const ZeroModes zm = zero_modes(psi.exps, psi.params);
  const double ell = psi.params.length_scale();
  const double t[3] = {1e-4, 1e-5, 1e-6};
  const double p = 2.0 - 2.0 * psi.exps.a;
  cplx w1p[3], w1m[3], w2p[3], w2m[3];
  for (int i = 0; i < 3; ++i) {
    for (double side : {1.0, -1.0}) {
      const double x = side * t[i] * ell;
      const cplx v = psi.value(x);
      const cplx dv = psi.derivative(x);
      const cplx w1 = v * zm.dphi1(x) - dv * zm.phi1(x);
      const cplx w2 = v * zm.dphi2(x) - dv * zm.phi2(x);
      (side > 0.0 ? w1p : w1m)[i] = w1;
      (side > 0.0 ? w2p : w2m)[i] = w2;
    }
  }
  BoundaryVectors out;
  out.Psi = Vector2c(extrapolate(t, w1p, p), extrapolate(t, w1m, p));
  out.PsiPrime = Vector2c(extrapolate(t, w2p, p), -extrapolate(t, w2m, p));
  return out;
}

double boundary_residual(const Eigenstate& psi, const BoundaryData& bd) {
  const BoundaryVectors bv = boundary_vectors(psi);
  const Matrix2c I = Matrix2c::Identity();
  const Vector2c r = (bd.U - I) * bv.Psi + cplx(0.0, bd.L0) * (bd.U + I) * bv.PsiPrime;
  return r.norm();
}

Eigenstate assemble_eigenstate(double lambda, Branch branch, const BoundaryData& bd, const Exponents& exps,
                               const PhysicalParams& params, int degenerate_index) {
  require_noninteger_c2(exps, "assemble_eigenstate");
  const double L = branch == Branch::plus ? bd.L_plus : bd.L_minus;
  const Matrix2c I = Matrix2c::Identity();
  Matrix2c K;
  if (std::isinf(L)) {
    K = bd.U - I;
  } else if (L == 0.0) {
    K = bd.U + I;
  } else {
    K = L * (bd.U - I) - cplx(0.0, bd.L0) * (bd.U + I);
  }
  const Eigen::JacobiSVD<Matrix2c> svd(K, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double tol = 1e-9 * std::max(1.0, s(0));
  Vector2c v;
  if (s(0) <= tol) {
    if (degenerate_index != 0 && degenerate_index != 1) throw InvalidParameter("degenerate_index must be 0 or 1");
    v = degenerate_index == 0 ? Vector2c(1.0, 0.0) : Vector2c(0.0, 1.0);
  } else if (s(1) <= tol) {
    v = svd.matrixV().col(1);
  } else {
    throw std::runtime_error("boundary condition matrix has full rank: level does not belong to this branch");
  }

  Eigenstate st;
  st.lambda = lambda;
  st.exps = exps;
  st.params = params;
  if (L == 0.0) {
    st.N_R1 = v(0);
    st.N_L1 = v(1);
  } else {
    st.N_R2 = v(0);
    st.N_L2 = v(1);
    if (!std::isinf(L)) {
      const SpectralFunctionValue f = spectral_function(lambda, exps);
      if (f.is_pole) throw std::runtime_error("level sits on a pole of the spectral function");
      st.N_R1 = -f.value * v(0);
      st.N_L1 = -f.value * v(1);
    }
  }

  // Phase convention; components at the rounding level of the kernel vector are zeroed.
  const double scale = std::max({std::abs(st.N_R1), std::abs(st.N_R2), std::abs(st.N_L1), std::abs(st.N_L2)});
  for (cplx* c : {&st.N_R1, &st.N_R2, &st.N_L1, &st.N_L2}) {
    if (std::abs(*c) <= 1e-14 * scale) *c = 0.0;
  }
  cplx* pivot = nullptr;
  for (cplx* c : {&st.N_R2, &st.N_R1, &st.N_L2, &st.N_L1}) {
    if (*c != 0.0) {
      pivot = c;
      break;
    }
  }
  const cplx phase = std::polar(1.0, -std::arg(*pivot));
  st.N_R1 *= phase;
  st.N_R2 *= phase;
  st.N_L1 *= phase;
  st.N_L2 *= phase;
  *pivot = std::abs(*pivot);
  st.finalize();

  // Normalize: int |psi|^2 = (|C_R|^2 + |C_L|^2)/kappa * int_0^inf R(y)^2 dy.
  const double y_max = std::max(8.0, 2.0 * std::sqrt(std::max(lambda, 0.0)));
  double radial = 0.0;
  for (double a = 0.0; a < y_max; a += 0.5) {
    const double b = std::min(a + 0.5, y_max);
    radial += quad::integrate(
                  [&](double y) -> cplx {
                    const double r = decaying_value(lambda, exps, y);
                    return r * r;
                  },
                  a, b, 1e-15)
                  .real();
  }
  const double norm2 = (std::norm(st.C_R) + std::norm(st.C_L)) / params.kappa() * radial;
  const double inv = 1.0 / std::sqrt(norm2);
  st.N_R1 *= inv;
  st.N_R2 *= inv;
  st.N_L1 *= inv;
  st.N_L2 *= inv;
  st.C_R *= inv;
  st.C_L *= inv;
  return st;
}

double sigma1_normalization(int n, int s, const Exponents& exps, const PhysicalParams& params) {
  if (n < 0) throw InvalidParameter("level index must be non-negative");
  const double c = s == 1 ? exps.c1 : (s == 2 ? exps.c2 : 0.0);
  if (s != 1 && s != 2) throw InvalidParameter("series must be 1 or 2");
  const GammaValue gc = log_gamma(c);
  if (gc.is_pole) throw InvalidParameter("series-2 normalization diverges at a = 1 (c2 = 0)");
  const double log_n2 = std::log(params.kappa()) + log_gamma(n + c).log_abs - 2.0 * gc.log_abs - std::lgamma(n + 1.0);
  return std::exp(0.5 * log_n2);
}

Eigenstate sigma1_eigenstate(int n, int s, const Exponents& exps, const PhysicalParams& params) {
  if (s != 1 && s != 2) throw InvalidParameter("series must be 1 or 2");
  if (s == 2 && specfun::is_gamma_pole(exps.c2)) {
    throw InvalidParameter("series-2 sigma1 states do not exist at a = 1");
  }
  const double N = sigma1_normalization(n, s, exps, params);
  Eigenstate st;
  st.lambda = 2.0 * n + (s == 1 ? exps.c1 : exps.c2);
  st.exps = exps;
  st.params = params;
  st.series = s;
  st.index = n;
  if (s == 1) {
    st.N_R1 = N;
    st.N_L1 = -N;
  } else {
    st.N_R2 = N;
    st.N_L2 = N;
  }
  return st;
}

Sigma1Basis::Sigma1Basis(const Exponents& exps, const PhysicalParams& params, int n_max)
    : exps_(exps), params_(params), n_max_(n_max) {
  if (n_max < 0) throw InvalidParameter("n_max must be non-negative");
}

void Sigma1Basis::evaluate(double x, std::vector<double>& psi1, std::vector<double>& psi2) const {
  if (x == 0.0) throw InvalidParameter("basis functions are not evaluated at x = 0");
  const double kappa = params_.kappa();
  const double y = kappa * std::abs(x);
  const double z = y * y;
  const double log_y = std::log(y);
  const double log_k = 0.5 * std::log(kappa);
  psi1 = specfun::normalized_laguerre_weighted(n_max_, exps_.c1 - 1.0, z, log_k + (exps_.c1 - 0.5) * log_y - 0.5 * z);
  psi2 = specfun::normalized_laguerre_weighted(n_max_, exps_.c2 - 1.0, z, log_k + (exps_.c2 - 0.5) * log_y - 0.5 * z);
  if (x < 0.0) {
    for (double& v : psi1) v = -v;
  }
}

void Sigma1Basis::evaluate_derivative(double x, std::vector<double>& dpsi1, std::vector<double>& dpsi2) const {
  if (x == 0.0) throw InvalidParameter("basis functions are not evaluated at x = 0");
  const double kappa = params_.kappa();
  const double y = kappa * std::abs(x);
  const double z = y * y;
  const double log_y = std::log(y);
  auto fill = [&](double c, double parity_sign, std::vector<double>& out) {
    const double q = c - 0.5;
    const double log_env = 1.5 * std::log(kappa) + q * log_y - 0.5 * z;
    const std::vector<double> h = specfun::normalized_laguerre_weighted(n_max_, c - 1.0, z, log_env);
    const std::vector<double> hs = specfun::normalized_laguerre_weighted(std::max(n_max_ - 1, 0), c, z, log_env);
    out.assign(static_cast<std::size_t>(n_max_) + 1, 0.0);
    for (int n = 0; n <= n_max_; ++n) {
      const double dh = n > 0 ? -std::sqrt(static_cast<double>(n)) * hs[n - 1] : 0.0;
      out[n] = parity_sign * (2.0 * y * dh + (q / y - y) * h[n]);
    }
  };
  // Odd functions have even derivatives and vice versa.
  fill(exps_.c1, 1.0, dpsi1);
  fill(exps_.c2, x > 0.0 ? 1.0 : -1.0, dpsi2);
}

double quadrature_cutoff(const PhysicalParams& params, double lambda_max) {
  return std::max(8.0, 2.0 * std::sqrt(std::max(lambda_max, 0.0))) * params.length_scale();
}

quad::Rule line_rule(const PhysicalParams& params, double lambda_max) {
  const double ell = params.length_scale();
  const quad::Rule half = quad::half_line_rule(quadrature_cutoff(params, lambda_max), 0.5 * ell);
  quad::Rule full;
  const std::size_t n = half.size();
  full.nodes.reserve(2 * n);
  full.weights.reserve(2 * n);
  for (std::size_t i = n; i-- > 0;) {
    full.nodes.push_back(-half.nodes[i]);
    full.weights.push_back(half.weights[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    full.nodes.push_back(half.nodes[i]);
    full.weights.push_back(half.weights[i]);
  }
  return full;
}

cplx inner_product(const std::function<cplx(double)>& f, const std::function<cplx(double)>& g,
                   const PhysicalParams& params, double lambda_max) {
  const double x_max = quadrature_cutoff(params, lambda_max);
  const double panel = 0.5 * params.length_scale();
  const int panels = static_cast<int>(std::ceil(x_max / panel));
  const double tol = 1e-10 / (2.0 * panels);
  cplx total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = k * panel;
    const double b = std::min((k + 1) * panel, x_max);
    total += quad::integrate([&](double x) { return std::conj(f(x)) * g(x); }, a, b, tol);
    total += quad::integrate([&](double x) { return std::conj(f(-x)) * g(-x); }, a, b, tol);
  }
  return total;
}

}  // namespace isq
