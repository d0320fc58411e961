#include "isq/dynamics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "isq/parallel.hpp"
#include "isq/specfun.hpp"

namespace isq {

namespace {

double lambda_max_for(int n_max) { return 2.0 * n_max + 2.0; }

// Basis values at every node, row-major: values[j * (n_max + 1) + n].
struct BasisTable {
  int stride = 0;
  std::vector<double> psi1;
  std::vector<double> psi2;
};

BasisTable tabulate(const Sigma1Basis& basis, const std::vector<double>& xs) {
  BasisTable t;
  t.stride = basis.n_max() + 1;
  const std::size_t total = xs.size() * static_cast<std::size_t>(t.stride);
  t.psi1.assign(total, 0.0);
  t.psi2.assign(total, 0.0);
  parallel_for(xs.size(), [&](std::size_t j) {
    std::vector<double> p1, p2;
    basis.evaluate(xs[j], p1, p2);
    std::copy(p1.begin(), p1.end(), t.psi1.begin() + static_cast<std::ptrdiff_t>(j * t.stride));
    std::copy(p2.begin(), p2.end(), t.psi2.begin() + static_cast<std::ptrdiff_t>(j * t.stride));
  });
  return t;
}

cplx synthesize_at(const BasisTable& t, std::size_t j, const std::vector<cplx>& c1, const std::vector<cplx>& c2) {
  cplx s = 0.0;
  const std::size_t off = j * static_cast<std::size_t>(t.stride);
  for (std::size_t n = 0; n < c1.size(); ++n) s += c1[n] * t.psi1[off + n];
  for (std::size_t n = 0; n < c2.size(); ++n) s += c2[n] * t.psi2[off + n];
  return s;
}

void resynthesize(WavePacket& p) {
  p.values = packet_values(p, p.grid);
}

}  // namespace

double WavePacket::coefficient_norm() const {
  double s = 0.0;
  for (const cplx& c : c1) s += std::norm(c);
  for (const cplx& c : c2) s += std::norm(c);
  return s;
}

std::vector<double> default_grid(const PhysicalParams& params, double lambda_max, int per_half) {
  if (per_half < 400) throw InvalidParameter("default grid needs at least 400 points per half-line");
  const double ell = params.length_scale();
  const double x_max = quadrature_cutoff(params, lambda_max);
  const int n_geo = 200;
  const double g0 = 1e-4 * ell;
  const double g1 = 0.1 * ell;
  std::vector<double> half;
  half.reserve(static_cast<std::size_t>(per_half));
  for (int i = 0; i < n_geo; ++i) half.push_back(g0 * std::pow(g1 / g0, static_cast<double>(i) / n_geo));
  const int n_uni = per_half - n_geo;
  for (int i = 0; i < n_uni; ++i) half.push_back(g1 + (x_max - g1) * static_cast<double>(i) / (n_uni - 1));
  std::vector<double> grid;
  grid.reserve(2 * half.size());
  for (auto it = half.rbegin(); it != half.rend(); ++it) grid.push_back(-*it);
  grid.insert(grid.end(), half.begin(), half.end());
  return grid;
}

cplx packet_value(const WavePacket& packet, double x) {
  const Sigma1Basis basis(packet.exps, packet.params, packet.n_max);
  std::vector<double> p1, p2;
  basis.evaluate(x, p1, p2);
  cplx s = 0.0;
  for (std::size_t n = 0; n < packet.c1.size(); ++n) s += packet.c1[n] * p1[n];
  for (std::size_t n = 0; n < packet.c2.size(); ++n) s += packet.c2[n] * p2[n];
  return s;
}

std::vector<cplx> packet_values(const WavePacket& packet, const std::vector<double>& xs) {
  const Sigma1Basis basis(packet.exps, packet.params, packet.n_max);
  std::vector<cplx> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t j) {
    std::vector<double> p1, p2;
    basis.evaluate(xs[j], p1, p2);
    cplx s = 0.0;
    for (std::size_t n = 0; n < packet.c1.size(); ++n) s += packet.c1[n] * p1[n];
    for (std::size_t n = 0; n < packet.c2.size(); ++n) s += packet.c2[n] * p2[n];
    out[j] = s;
  });
  return out;
}

double grid_norm(const WavePacket& packet) {
  const quad::Rule rule = line_rule(packet.params, lambda_max_for(packet.n_max));
  const std::vector<cplx> v = packet_values(packet, rule.nodes);
  double s = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) s += rule.weights[j] * std::norm(v[j]);
  return s;
}

WavePacket make_packet(const std::vector<cplx>& c1, const std::vector<cplx>& c2, const Exponents& exps,
                       const PhysicalParams& params) {
  WavePacket p;
  p.exps = exps;
  p.params = params;
  p.n_max = static_cast<int>(std::max(c1.size(), c2.size())) - 1;
  if (p.n_max < 0) throw InvalidParameter("packet needs at least one coefficient");
  p.c1 = c1;
  p.c2 = c2;
  p.c1.resize(static_cast<std::size_t>(p.n_max) + 1, 0.0);
  p.c2.resize(static_cast<std::size_t>(p.n_max) + 1, 0.0);
  p.grid = default_grid(params, lambda_max_for(p.n_max));
  resynthesize(p);
  return p;
}

Expansion expand(const std::function<cplx(double)>& psi, const Exponents& exps, const PhysicalParams& params,
                 int n_max, double residual_tolerance) {
  if (n_max < 0) throw InvalidParameter("n_max must be non-negative");
  const Sigma1Basis basis(exps, params, n_max);
  const quad::Rule rule = line_rule(params, lambda_max_for(n_max));
  const BasisTable table = tabulate(basis, rule.nodes);
  std::vector<cplx> f(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) f[j] = psi(rule.nodes[j]);

  Expansion out;
  WavePacket& p = out.packet;
  p.exps = exps;
  p.params = params;
  p.n_max = n_max;
  p.c1.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  p.c2.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const std::size_t off = j * static_cast<std::size_t>(table.stride);
    const cplx wf = rule.weights[j] * f[j];
    out.input_norm += rule.weights[j] * std::norm(f[j]);
    for (int n = 0; n <= n_max; ++n) {
      p.c1[n] += table.psi1[off + n] * wf;
      p.c2[n] += table.psi2[off + n] * wf;
    }
  }
  for (std::size_t j = 0; j < rule.size(); ++j) {
    out.residual += rule.weights[j] * std::norm(f[j] - synthesize_at(table, j, p.c1, p.c2));
  }
  if (out.residual > residual_tolerance) {
    std::ostringstream os;
    os << "expansion residual " << out.residual << " exceeds tolerance " << residual_tolerance << " with n_max = "
       << n_max;
    throw TruncationError(os.str());
  }
  p.grid = default_grid(params, lambda_max_for(n_max));
  resynthesize(p);
  return out;
}

WavePacket evolve(const WavePacket& packet, double T) {
  WavePacket p = packet;
  const Sigma1Basis basis(p.exps, p.params, p.n_max);
  const double wt = p.params.omega * T;
  for (int n = 0; n <= p.n_max; ++n) {
    p.c1[n] *= std::polar(1.0, -basis.level(n, 1) * wt);
    p.c2[n] *= std::polar(1.0, -basis.level(n, 2) * wt);
  }
  p.time += T;
  resynthesize(p);
  return p;
}

OriginAmplitudes origin_amplitudes(const WavePacket& packet, int side) {
  if (side != 1 && side != -1) throw InvalidParameter("side must be +1 or -1");
  const Exponents& e = packet.exps;
  const double kappa = packet.params.kappa();
  const double root_k = std::sqrt(kappa);
  const int n = packet.n_max;
  // Leading coefficient of psi_n^(s) near 0+: sqrt(kappa) h_n(0) y^{c_s - 1/2}.
  const std::vector<double> h1 = specfun::normalized_laguerre(n, e.c1 - 1.0, 0.0);
  const std::vector<double> h2 = specfun::normalized_laguerre(n, e.c2 - 1.0, 0.0);
  cplx A = 0.0;
  cplx B = 0.0;
  for (int k = 0; k <= n; ++k) {
    A += packet.c1[k] * root_k * h1[k];
    B += packet.c2[k] * root_k * h2[k];
  }
  A *= std::pow(kappa, e.c1 - 0.5) * static_cast<double>(side);  // series 1 is odd
  B *= std::pow(kappa, e.c2 - 0.5);
  if (specfun::is_gamma_pole(e.c2) && n > 0) {
    // c2 = 0: the even series starts at y^{3/2} = y^{c1 - 1/2} with slope -sqrt(k) h_{k-1}^{(0)}(0).
    const std::vector<double> h0 = specfun::normalized_laguerre(n - 1, 0.0, 0.0);
    cplx extra = 0.0;
    for (int k = 1; k <= n; ++k) extra += packet.c2[k] * root_k * (-std::sqrt(static_cast<double>(k)) * h0[k - 1]);
    A += extra * std::pow(kappa, e.c1 - 0.5);
  }
  return {A, B};
}

double probability_current_at_origin(const WavePacket& packet, int side) {
  const OriginAmplitudes amp = origin_amplitudes(packet, side);
  const double p = packet.exps.c1 - 0.5;
  const double q = packet.exps.c2 - 0.5;
  // Im(psi* psi') with psi = A t^p + B t^q, t = |x|, dt/dx = side.
  return side * packet.params.hbar / packet.params.m * (q - p) * std::imag(std::conj(amp.A) * amp.B);
}

double probability_current_numeric(const WavePacket& packet, double x) {
  if (x == 0.0) throw InvalidParameter("numeric current needs x != 0");
  auto central = [&](double h) { return (packet_value(packet, x + h) - packet_value(packet, x - h)) / (2.0 * h); };
  const double h = std::abs(x) / 50.0;
  const cplx d = (4.0 * central(0.5 * h) - central(h)) / 3.0;
  return packet.params.hbar / packet.params.m * std::imag(std::conj(packet_value(packet, x)) * d);
}

double probability_current_extrapolated(const WavePacket& packet, int side) {
  if (side != 1 && side != -1) throw InvalidParameter("side must be +1 or -1");
  const double ell = packet.params.length_scale();
  const double power = 2.0 - 2.0 * packet.exps.a;
  Eigen::Matrix3d m;
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    const double t = 1e-4 * std::pow(0.1, i);
    m(i, 0) = 1.0;
    m(i, 1) = std::pow(t, power);
    m(i, 2) = t * t;
    rhs(i) = probability_current_numeric(packet, side * t * ell);
  }
  return m.partialPivLu().solve(rhs)(0);
}

std::function<double(double)> caustic_density(std::function<double(double)> rho_initial, double a, int k) {
  if (k < 0) throw InvalidParameter("caustic index must be non-negative");
  const double c = specfun::cos_pi(a * k);
  const double s = specfun::sin_pi(a * k);
  return [rho = std::move(rho_initial), c2 = c * c, s2 = s * s](double x) { return c2 * rho(x) + s2 * rho(-x); };
}

CopyReport copy_experiment(double width, double center, double a, int k, int n_max, const PhysicalParams& base,
                           double residual_tolerance) {
  if (!(width > 0.0) || !(center > 0.0)) throw InvalidParameter("copy experiment needs width > 0 and center > 0");
  if (k < 1) throw InvalidParameter("caustic index k must be at least 1");
  // Mass of the untruncated Gaussian on x < 0: erfc(sqrt(2) center/width)/2.
  const double leak = 0.5 * std::erfc(std::sqrt(2.0) * center / width);
  if (leak > 1e-10) throw InvalidParameter("initial Gaussian is not confined to x > 0 to 1e-10");
  PhysicalParams params = base;
  params.g = coupling_for_exponent(a, base);
  const bool limit = a == 0.5 || a == 1.0;
  const Exponents exps = exponents_from_coupling(params, limit ? CouplingMode::limit_test : CouplingMode::tunneling);

  const double norm = std::sqrt(width * std::sqrt(kPi / 2.0));
  auto psi0 = [=](double x) -> cplx {
    if (x <= 0.0) return 0.0;
    const double u = (x - center) / width;
    return std::exp(-u * u) / norm;
  };
  auto rho0 = [=](double x) { return std::norm(psi0(x)); };

  const Expansion ex = expand(psi0, exps, params, n_max, residual_tolerance);
  CopyReport rep;
  rep.a = exps.a;
  rep.k = k;
  rep.T = k * kPi / params.omega;
  rep.residual = ex.residual;
  WavePacket p = ex.packet;
  const Sigma1Basis basis(exps, params, n_max);
  for (int n = 0; n <= n_max; ++n) {
    // Exact phases at T = k pi/omega: exp(-i lambda k pi).
    p.c1[n] *= std::polar(1.0, -kPi * std::fmod(basis.level(n, 1) * k, 2.0));
    p.c2[n] *= std::polar(1.0, -kPi * std::fmod(basis.level(n, 2) * k, 2.0));
  }
  p.time = rep.T;
  const auto predicted = caustic_density(rho0, exps.a, k);
  const quad::Rule rule = line_rule(params, lambda_max_for(n_max));
  const std::vector<cplx> v = packet_values(p, rule.nodes);
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double rho = std::norm(v[j]);
    const double x = rule.nodes[j];
    (x > 0.0 ? rep.mass_right : rep.mass_left) += rule.weights[j] * rho;
    rep.l1_error += rule.weights[j] * std::abs(rho - predicted(x));
  }
  return rep;
}

}  // namespace isq
