#include <cmath>
#include <random>

#include "doctest.h"
#include "isq/eigenbasis.hpp"
#include "isq/specfun.hpp"
#include "reference_values.hpp"

using namespace isq;

namespace {

const PhysicalParams kNatural{1.0, 1.0, 1.0, 5.0 / 32.0};

Exponents natural_exponents() { return exponents_from_coupling(kNatural); }

Matrix2c random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix2c z;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) z(i, j) = cplx(n(rng), n(rng));
  Eigen::HouseholderQR<Matrix2c> qr(z);
  return qr.householderQ();
}

// (H - E) psi by a 5-point second derivative.
cplx schrodinger_residual(const Eigenstate& s, double x, double h) {
  const auto& p = s.params;
  const cplx d2 = (-s.value(x + 2 * h) + 16.0 * s.value(x + h) - 30.0 * s.value(x) + 16.0 * s.value(x - h) -
                   s.value(x - 2 * h)) /
                  (12.0 * h * h);
  const double V = 0.5 * p.m * p.omega * p.omega * x * x + p.g / (x * x);
  return -p.hbar * p.hbar / (2.0 * p.m) * d2 + (V - s.energy()) * s.value(x);
}

double residual_sup(const Eigenstate& s) {
  double res = 0.0, sup = 0.0;
  for (double x = 0.1; x <= 6.0 + 1e-12; x += 0.05) {
    for (double side : {1.0, -1.0}) {
      res = std::max(res, std::abs(schrodinger_residual(s, side * x, 1e-3)));
      sup = std::max(sup, std::abs(s.value(side * x)));
    }
  }
  return res / sup;
}

double norm_of(const Eigenstate& s) {
  auto f = [&](double x) { return s.value(x); };
  return inner_product(f, f, s.params, std::max(s.lambda, 1.0)).real();
}

struct Case {
  std::string name;
  Matrix2c U;
};

std::vector<Case> boundary_cases() {
  std::mt19937_64 rng(2024);
  return {{"identity", Matrix2c::Identity()},
          {"minus_identity", -Matrix2c::Identity()},
          {"sigma1", pauli_sigma1()},
          {"diag", diagonal_unitary(kPi / 3.0, -kPi / 4.0)},
          {"random", random_unitary(rng)},
          {"random2", random_unitary(rng)}};
}

}  // namespace

TEST_CASE("local solutions: terminating cases") {
  const Exponents e = natural_exponents();
  const double y = 0.8;
  const double phi1 = local_solution_value({1, e.c1, e}, y, kNatural);
  CHECK(std::abs(phi1 - std::pow(y, e.c1 - 0.5) * std::exp(-0.5 * y * y)) < 1e-15);
  const double phi2 = local_solution_value({2, e.c2 + 2.0, e}, y, kNatural);
  CHECK(std::abs(phi2 - std::pow(y, e.c2 - 0.5) * std::exp(-0.5 * y * y) * (1.0 - y * y / e.c2)) < 1e-14);
  CHECK_THROWS_AS(local_solution_value({3, 0.0, e}, y, kNatural), InvalidParameter);
  CHECK_THROWS_AS(local_solution_value({1, 0.0, e}, -y, kNatural), InvalidParameter);
}

TEST_CASE("local solutions: small-x log slope") {
  const Exponents e = natural_exponents();
  for (int kind : {1, 2}) {
    for (double lam : {0.3, 3.1, -2.0}) {
      const LocalSolution sol{kind, lam, e};
      const double x1 = 1e-6, x2 = 1e-4;
      const double slope = std::log(std::abs(local_solution_value(sol, x2, kNatural) /
                                             local_solution_value(sol, x1, kNatural))) /
                           std::log(x2 / x1);
      CHECK(std::abs(slope - ((kind == 1 ? e.c1 : e.c2) - 0.5)) < 1e-3);
    }
  }
}

TEST_CASE("local solutions satisfy the Schrodinger equation") {
  const Exponents e = natural_exponents();
  for (int kind : {1, 2}) {
    for (double lam : {0.9, 4.4}) {
      const LocalSolution sol{kind, lam, e};
      double res = 0.0, sup = 0.0;
      for (int i = 0; i < 20; ++i) {
        const double x = 0.2 + 0.15 * i, h = 1e-3;
        auto f = [&](double t) { return local_solution_value(sol, t, kNatural); };
        const double d2 = (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
        res = std::max(res, std::abs(-0.5 * d2 + (0.5 * x * x + kNatural.g / (x * x) - lam) * f(x)));
        sup = std::max(sup, std::abs(f(x)));
        const double fd = (f(x + h) - f(x - h)) / (2 * h);
        CHECK(std::abs(local_solution_derivative(sol, x, kNatural) - fd) < 1e-5 * std::max(1.0, std::abs(fd)));
      }
      CHECK(res <= 1e-5 * sup);
    }
  }
}

TEST_CASE("zero modes") {
  const Exponents e = natural_exponents();
  const ZeroModes z = zero_modes(e, kNatural);
  for (double x : {0.3, -0.3, 1.0, -1.0, 0.5}) {
    CHECK(std::abs(z.phi1(x) * z.dphi2(x) - z.dphi1(x) * z.phi2(x) - 1.0) < 1e-8);
  }
  for (double x : {0.2, 0.9, 2.5}) {
    CHECK(z.phi1(-x) == -z.phi1(x));
    CHECK(z.phi2(-x) == z.phi2(x));
  }
}

TEST_CASE("boundary vectors: closed forms") {
  const Exponents e = natural_exponents();
  const BoundaryVectors b1 = boundary_vectors(sigma1_eigenstate(2, 1, e, kNatural));
  CHECK(b1.Psi.norm() == 0.0);
  CHECK(b1.PsiPrime.norm() > 0.0);
  const BoundaryVectors b2 = boundary_vectors(sigma1_eigenstate(2, 2, e, kNatural));
  CHECK(b2.PsiPrime.norm() == 0.0);
  Eigenstate generic;
  generic.exps = e;
  generic.params = kNatural;
  generic.N_R2 = 1.0;
  generic.N_L2 = 1.0;
  const BoundaryVectors bg = boundary_vectors(generic);
  CHECK(std::abs(bg.Psi(0) - 1.5) < 1e-15);
  CHECK(std::abs(bg.Psi(1) - 1.5) < 1e-15);
}

TEST_CASE("sigma1 eigenstates: normalization, parity and values") {
  const Exponents e = natural_exponents();
  CHECK(std::abs(sigma1_normalization(3, 1, e, kNatural) - reference::sigma1_norm_n3_s1) < 1e-14);
  CHECK(std::abs(sigma1_normalization(3, 2, e, kNatural) - reference::sigma1_norm_n3_s2) < 1e-15);
  CHECK(std::abs(sigma1_eigenstate(4, 2, e, kNatural).value(0.9).real() - reference::sigma1_psi_n4_s2_x0p9) < 1e-14);
  CHECK(std::abs(sigma1_eigenstate(2, 1, e, kNatural).value(-1.3).real() - reference::sigma1_psi_n2_s1_xm1p3) <
        1e-14);
  for (int n = 0; n <= 10; ++n) {
    for (int s : {1, 2}) {
      const Eigenstate st = sigma1_eigenstate(n, s, e, kNatural);
      CHECK(std::abs(st.lambda - (2.0 * n + (s == 1 ? e.c1 : e.c2))) < 1e-15);
      CHECK(std::abs(norm_of(st) - 1.0) <= 1e-8);
      for (double x : {0.1, 0.77, 2.3}) {
        CHECK(std::abs(st.value(-x) - (s == 1 ? -1.0 : 1.0) * st.value(x)) < 1e-15);
      }
    }
  }
}

TEST_CASE("sigma1 series 2 does not exist at a = 1") {
  const PhysicalParams p{1.0, 1.0, 1.0, 3.0 / 8.0};
  const Exponents e = exponents_from_coupling(p, CouplingMode::limit_test);
  CHECK_THROWS_AS(sigma1_eigenstate(0, 2, e, p), InvalidParameter);
  CHECK_NOTHROW(sigma1_eigenstate(0, 1, e, p));
}

TEST_CASE("sigma1 states reduce to Hermite functions as g -> 0") {
  const PhysicalParams p{1.0, 1.0, 1.0, 1e-10};
  const Exponents e = exponents_from_coupling(p);
  for (int n = 0; n <= 2; ++n) {
    for (int s : {1, 2}) {
      const int k = s == 1 ? 2 * n + 1 : 2 * n;
      const double hn = 1.0 / std::sqrt(std::ldexp(1.0, k) * std::tgamma(k + 1.0) * std::sqrt(kPi));
      const Eigenstate st = sigma1_eigenstate(n, s, e, p);
      auto herm = [&](double x) { return hn * specfun::hermite(k, x) * std::exp(-0.5 * x * x); };
      const double sign = st.value(0.3).real() * herm(0.3) > 0 ? 1.0 : -1.0;
      for (double x = 0.05; x <= 5.0; x += 0.05) CHECK(std::abs(sign * st.value(x).real() - herm(x)) < 1e-8);
    }
  }
}

TEST_CASE("inner products") {
  const Exponents e = natural_exponents();
  auto gauss = [](double x) { return cplx(std::exp(-0.5 * x * x)); };
  CHECK(std::abs(inner_product(gauss, gauss, kNatural).real() - std::sqrt(kPi)) < 1e-12);
  const Eigenstate a = sigma1_eigenstate(0, 1, e, kNatural), b = sigma1_eigenstate(0, 2, e, kNatural);
  CHECK(std::abs(inner_product([&](double x) { return a.value(x); }, [&](double x) { return b.value(x); },
                               kNatural)) <= 1e-10);
}

TEST_CASE("Gram matrix of the sigma1 basis") {
  const Exponents e = natural_exponents();
  const int n_max = 9;
  std::vector<Eigenstate> states;
  for (int s : {1, 2})
    for (int n = 0; n <= n_max; ++n) states.push_back(sigma1_eigenstate(n, s, e, kNatural));
  double worst = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i; j < states.size(); ++j) {
      const cplx g = inner_product([&](double x) { return states[i].value(x); },
                                   [&](double x) { return states[j].value(x); }, kNatural, 2.0 * n_max + 2.0);
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("fast basis agrees with the eigenstates") {
  const Exponents e = natural_exponents();
  const Sigma1Basis basis(e, kNatural, 12);
  std::vector<double> p1, p2, d1, d2;
  for (double x : {-3.1, -0.4, 1e-3, 0.7, 2.2}) {
    basis.evaluate(x, p1, p2);
    basis.evaluate_derivative(x, d1, d2);
    for (int n = 0; n <= 12; ++n) {
      const Eigenstate s1 = sigma1_eigenstate(n, 1, e, kNatural), s2 = sigma1_eigenstate(n, 2, e, kNatural);
      CHECK(std::abs(p1[n] - s1.value(x).real()) < 1e-12 * std::max(1.0, std::abs(p1[n])));
      CHECK(std::abs(p2[n] - s2.value(x).real()) < 1e-12 * std::max(1.0, std::abs(p2[n])));
      CHECK(std::abs(d1[n] - s1.derivative(x).real()) < 1e-10 * std::max(1.0, std::abs(d1[n])));
      CHECK(std::abs(d2[n] - s2.derivative(x).real()) < 1e-10 * std::max(1.0, std::abs(d2[n])));
    }
  }
}

TEST_CASE("assembled eigenstates for sigma1 reproduce the closed forms") {
  const Exponents e = natural_exponents();
  const BoundaryData bd = decompose_unitary(pauli_sigma1());
  const SpectralFamily fam = spectral_family(bd, e, 3, kNatural);
  for (int n = 0; n <= 3; ++n) {
    const Eigenstate even = assemble_eigenstate(fam.plus.levels[n], Branch::plus, bd, e, kNatural);
    CHECK(std::abs(even.N_R1) < 1e-12);
    CHECK(std::abs(even.N_R2 - even.N_L2) < 1e-12);
    const Eigenstate odd = assemble_eigenstate(fam.minus.levels[n], Branch::minus, bd, e, kNatural);
    CHECK(std::abs(odd.N_R2) < 1e-12);
    CHECK(std::abs(odd.N_R1 + odd.N_L1) < 1e-12);
    const Eigenstate ref2 = sigma1_eigenstate(n, 2, e, kNatural), ref1 = sigma1_eigenstate(n, 1, e, kNatural);
    for (double x : {-1.2, 0.4, 2.0}) {
      CHECK(std::abs(std::abs(even.value(x)) - std::abs(ref2.value(x))) < 1e-9);
      CHECK(std::abs(std::abs(odd.value(x)) - std::abs(ref1.value(x))) < 1e-9);
    }
  }
}

TEST_CASE("minus identity gives half-line supported degenerate pairs") {
  const Exponents e = natural_exponents();
  const BoundaryData bd = decompose_unitary(-Matrix2c::Identity());
  const Eigenstate right = assemble_eigenstate(e.c1 + 2.0, Branch::plus, bd, e, kNatural, 0);
  const Eigenstate left = assemble_eigenstate(e.c1 + 2.0, Branch::plus, bd, e, kNatural, 1);
  CHECK(std::abs(right.N_R2) == 0.0);
  CHECK(std::abs(right.N_L1) + std::abs(right.N_L2) == 0.0);
  CHECK(std::abs(right.N_R1) > 0.0);
  CHECK(std::abs(left.N_R1) + std::abs(left.N_R2) == 0.0);
  CHECK(std::abs(left.N_L1) > 0.0);
  CHECK(std::abs(norm_of(right) - 1.0) < 1e-8);
}

TEST_CASE("assembled eigenstates: boundary condition, norm, residual, slope, phase") {
  const Exponents e = natural_exponents();
  for (const Case& c : boundary_cases()) {
    CAPTURE(c.name);
    const BoundaryData bd = decompose_unitary(c.U);
    const SpectralFamily fam = spectral_family(bd, e, 2, kNatural);
    for (Branch br : {Branch::plus, Branch::minus}) {
      const SpectrumResult& r = br == Branch::plus ? fam.plus : fam.minus;
      for (int n = 0; n <= 2; ++n) {
        CAPTURE(n);
        const Eigenstate s = assemble_eigenstate(r.levels[n], br, bd, e, kNatural);
        CHECK(boundary_residual(s, bd) <= 1e-9);
        CHECK(std::abs(norm_of(s) - 1.0) <= 1e-8);
        CHECK(residual_sup(s) <= 1e-5);
        // ratio condition wherever the divergent component is present
        const double F = spectral_function(s.lambda, e).value;
        if (std::abs(s.N_R2) > 1e-12) CHECK(std::abs(s.N_R1 / s.N_R2 + F) < 1e-9 * std::max(1.0, std::abs(F)));
        if (std::abs(s.N_L2) > 1e-12) CHECK(std::abs(s.N_L1 / s.N_L2 + F) < 1e-9 * std::max(1.0, std::abs(F)));
        // phase convention
        if (std::abs(s.N_R2) > 0.0) {
          CHECK(s.N_R2.imag() == 0.0);
          CHECK(s.N_R2.real() > 0.0);
        } else if (std::abs(s.N_R1) > 0.0) {
          CHECK(s.N_R1.imag() == 0.0);
          CHECK(s.N_R1.real() > 0.0);
        }
        // small-x log slope of the dominant side
        const double side = std::abs(s.N_R1) + std::abs(s.N_R2) > 0.0 ? 1.0 : -1.0;
        const cplx n2 = side > 0 ? s.N_R2 : s.N_L2;
        const double expected = (std::abs(n2) > 1e-12 ? e.c2 : e.c1) - 0.5;
        const double slope = std::log(std::abs(s.value(side * 1e-4) / s.value(side * 1e-6))) / std::log(100.0);
        CHECK(std::abs(slope - expected) < 1e-3);
      }
    }
  }
}

TEST_CASE("boundary vectors from Wronskian limits") {
  const Exponents e = natural_exponents();
  std::mt19937_64 rng(77);
  const BoundaryData bd = decompose_unitary(random_unitary(rng));
  const SpectralFamily fam = spectral_family(bd, e, 1, kNatural);
  for (double lam : fam.plus.levels) {
    const Eigenstate s = assemble_eigenstate(lam, Branch::plus, bd, e, kNatural);
    const BoundaryVectors exact = boundary_vectors(s);
    const BoundaryVectors num = boundary_vectors_numeric(s);
    CHECK((num.Psi - exact.Psi).norm() <= 1e-6 * exact.Psi.norm());
    CHECK((num.PsiPrime - exact.PsiPrime).norm() <= 1e-6 * exact.PsiPrime.norm());
  }
}
