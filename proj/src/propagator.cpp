#include "isq/propagator.hpp"

#include <cmath>
#include <sstream>

#include "isq/specfun.hpp"

namespace isq {

namespace {

struct TimeFactors {
  double s;
  double c;
  int half_periods;  ///< k with k pi < omega T < (k + 1) pi
};

TimeFactors time_factors(double T, const PhysicalParams& params) {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidParameter("kernel duration T must be positive");
  const double s = std::sin(params.omega * T);
  if (std::abs(s) < kCausticThreshold) {
    std::ostringstream os;
    os.precision(17);
    os << "T = " << T << " is a caustic time (|sin(omega T)| < " << kCausticThreshold << "); use caustic_weights";
    throw CausticTimeError(os.str());
  }
  return {s, std::cos(params.omega * T), static_cast<int>(std::floor(params.omega * T / kPi))};
}

// The kernel continued from omega T in (0, pi) through the caustics (via
// T - i0) has arg(sin) = k pi, so the Bessel argument z ~ -i/sin has
// arg z = -pi/2 - k pi. Relative to the principal value (arg -pi/2 for even
// k, +pi/2 for odd k) z^nu picks up exp(-i m pi nu), m = k rounded up to even.
cplx sheet_factor(double nu, int half_periods) {
  const int m = half_periods + (half_periods % 2 != 0 ? 1 : 0);
  return std::polar(1.0, -kPi * nu * m);
}

// sum_k q^k / (k! Gamma(nu + k + 1)), the entire part of I_nu(z) (z/2)^{-nu}, q = z^2/4.
cplx bessel_entire_part(double nu, cplx q) {
  cplx sum = 0.0;
  cplx power = 1.0;  // q^k / k!
  const double scale = std::sqrt(std::abs(q));
  for (int k = 0; k < 2000; ++k) {
    if (k > 0) power *= q / static_cast<double>(k);
    const cplx term = power * specfun::log_gamma(nu + k + 1.0).reciprocal();
    sum += term;
    if (k > scale + 2 && std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
  }
  throw specfun::ConvergenceError("bessel series for complex kernel did not converge");
}

}  // namespace

cplx kernel_closed(const KernelRequest& req, const Exponents& exps, const PhysicalParams& params) {
  if (req.x_f == 0.0 || req.x_i == 0.0) throw InvalidParameter("kernel positions must be non-zero");
  const TimeFactors tf = time_factors(req.T, params);
  const double mw = params.m * params.omega;
  const double prod = std::abs(req.x_f * req.x_i);
  const double w = mw * prod / (params.hbar * tf.s);
  // Bessel argument (m omega / (i hbar)) |x_f x_i| / sin = -i w.
  const cplx z(0.0, -w);
  const cplx i_plus = sheet_factor(exps.a, tf.half_periods) * specfun::bessel_i(exps.a, z);
  const cplx i_minus = sheet_factor(-exps.a, tf.half_periods) * specfun::bessel_i(-exps.a, z);
  const bool same_side = (req.x_f > 0.0) == (req.x_i > 0.0);
  const cplx bracket = same_side ? i_minus + i_plus : i_minus - i_plus;
  const cplx pref = mw / (cplx(0.0, 2.0) * params.hbar * tf.s) * std::sqrt(prod);
  const double phase = mw * tf.c * (req.x_f * req.x_f + req.x_i * req.x_i) / (2.0 * params.hbar * tf.s);
  return pref * std::polar(1.0, phase) * bracket;
}

cplx kernel_closed_complex(cplx r_f, cplx r_i, bool same_side, double T, const Exponents& exps,
                           const PhysicalParams& params) {
  const TimeFactors tf = time_factors(T, params);
  const double mw = params.m * params.omega;
  const cplx rr = r_f * r_i;
  // z = -i m omega r_f r_i / (hbar sin); (z/2)^nu = (-i m omega/(2 hbar sin))^nu r_f^nu r_i^nu.
  const cplx base(0.0, -mw / (2.0 * params.hbar * tf.s));
  const cplx z = 2.0 * base * rr;
  const cplx q = 0.25 * z * z;
  auto bessel = [&](double nu) {
    return std::pow(base, nu) * std::pow(r_f, nu) * std::pow(r_i, nu) * bessel_entire_part(nu, q);
  };
  const cplx i_plus = sheet_factor(exps.a, tf.half_periods) * bessel(exps.a);
  const cplx i_minus = sheet_factor(-exps.a, tf.half_periods) * bessel(-exps.a);
  const cplx bracket = same_side ? i_minus + i_plus : i_minus - i_plus;
  const cplx pref = mw / (cplx(0.0, 2.0) * params.hbar * tf.s) * std::sqrt(r_f) * std::sqrt(r_i);
  const cplx phase = cplx(0.0, mw * tf.c / (2.0 * params.hbar * tf.s)) * (r_f * r_f + r_i * r_i);
  return pref * std::exp(phase) * bracket;
}

cplx mehler_kernel(double x_f, double x_i, double T, const PhysicalParams& params) {
  const TimeFactors tf = time_factors(T, params);
  const double mw = params.m * params.omega;
  // (i sin)^{-1/2} continued through the caustics: arg(sin) = k pi.
  const cplx amp = std::sqrt(mw / (2.0 * kPi * params.hbar * std::abs(tf.s))) *
                   std::polar(1.0, -kPi / 4.0 - kPi / 2.0 * tf.half_periods);
  const double phase = mw * ((x_f * x_f + x_i * x_i) * tf.c - 2.0 * x_f * x_i) / (2.0 * params.hbar * tf.s);
  return amp * std::polar(1.0, phase);
}

SpectralKernel kernel_spectral(const KernelRequest& req, const Exponents& exps, const PhysicalParams& params) {
  if (req.x_f == 0.0 || req.x_i == 0.0) throw InvalidParameter("kernel positions must be non-zero");
  if (!(req.epsilon > 0.0)) throw InvalidParameter("spectral kernel needs epsilon > 0");
  if (!(req.T > 0.0)) throw InvalidParameter("kernel duration T must be positive");
  const int n_max = req.n_max >= 0 ? req.n_max : static_cast<int>(std::ceil(40.0 / req.epsilon));
  const Sigma1Basis basis(exps, params, n_max);
  std::vector<double> f1, f2, i1, i2;
  basis.evaluate(req.x_f, f1, f2);
  basis.evaluate(req.x_i, i1, i2);
  const double wt = params.omega * req.T;
  cplx sum = 0.0;
  double last = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double l1 = basis.level(n, 1);
    const double l2 = basis.level(n, 2);
    const cplx t1 = f1[n] * i1[n] * std::exp(-0.5 * l1 * req.epsilon) * std::polar(1.0, -l1 * wt);
    const cplx t2 = f2[n] * i2[n] * std::exp(-0.5 * l2 * req.epsilon) * std::polar(1.0, -l2 * wt);
    sum += t1 + t2;
    last = std::abs(t1) + std::abs(t2);
  }
  // Successive modes are damped by e^{-epsilon} (lambda steps by 2).
  const double r = std::exp(-req.epsilon);
  return {sum, last * r / (1.0 - r), n_max};
}

cplx richardson_epsilon(const cplx& k_eps, const cplx& k_half, const cplx& k_quarter) {
  const cplx r1 = 2.0 * k_half - k_eps;
  const cplx r2 = 2.0 * k_quarter - k_half;
  return (4.0 * r2 - r1) / 3.0;
}

cplx kernel_spectral_extrapolated(double x_f, double x_i, double T, const Exponents& exps,
                                  const PhysicalParams& params, double e0) {
  if (!(e0 > 0.0)) {
    // The damped sum equals the kernel at the complex time T - i epsilon/(2 omega);
    // its epsilon-derivatives grow like (kappa^2 x^2 / sin^2 wT), which sets the start.
    const double s = std::sin(params.omega * T);
    const double kx = params.kappa() * std::max({std::abs(x_f), std::abs(x_i), 1.0});
    e0 = std::min(0.02, 0.05 * s * s / (kx * kx));
  }
  cplx k[3];
  for (int j = 0; j < 3; ++j) {
    KernelRequest req{x_f, x_i, T, e0 / static_cast<double>(1 << j), -1};
    k[j] = kernel_spectral(req, exps, params).value;
  }
  return richardson_epsilon(k[0], k[1], k[2]);
}

CausticWeights caustic_weights(int k, double a) {
  if (k < 1) throw InvalidParameter("caustic index k must be at least 1");
  if (!(a >= 0.5 && a <= 1.0)) throw InvalidParameter("caustic weights need 1/2 <= a <= 1");
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  const double ak = a * k;
  return {k, cplx(sign * specfun::cos_pi(ak), 0.0), cplx(0.0, sign * specfun::sin_pi(ak))};
}

}  // namespace isq
