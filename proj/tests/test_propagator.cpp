#include <cmath>
#include <random>

#include "doctest.h"
#include "isq/dynamics.hpp"
#include "isq/propagator.hpp"
#include "isq/quadrature.hpp"
#include "reference_values.hpp"

using namespace isq;

namespace {

const PhysicalParams kNatural{1.0, 1.0, 1.0, 5.0 / 32.0};

struct Setup {
  PhysicalParams params;
  Exponents exps;
};

Setup at_exponent(double a) {
  PhysicalParams p{1.0, 1.0, 1.0, 0.0};
  p.g = coupling_for_exponent(a, p);
  const bool limit = a == 0.5 || a == 1.0;
  return {p, exponents_from_coupling(p, limit ? CouplingMode::limit_test : CouplingMode::tunneling)};
}

double rel(cplx x, cplx y) { return std::abs(x - y) / std::abs(y); }

// Off-caustic durations drawn away from multiples of pi.
double random_duration(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.2, kPi - 0.2);
  std::uniform_int_distribution<int> k(0, 2);
  return d(rng) + kPi * k(rng);
}

double random_position(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.2, 2.5);
  std::bernoulli_distribution neg(0.5);
  return neg(rng) ? -d(rng) : d(rng);
}

}  // namespace

TEST_CASE("closed kernel against high-precision values") {
  const Exponents e = exponents_from_coupling(kNatural);
  CHECK(rel(kernel_closed({1.0, 0.7, 1.1}, e, kNatural), reference::kernel_closed_same) < 1e-12);
  CHECK(rel(kernel_closed({-1.0, 0.7, 1.1}, e, kNatural), reference::kernel_closed_cross) < 1e-12);
}

TEST_CASE("closed kernel is symmetric") {
  const Exponents e = exponents_from_coupling(kNatural);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const double xf = random_position(rng), xi = random_position(rng), T = random_duration(rng);
    CHECK(rel(kernel_closed({xf, xi, T}, e, kNatural), kernel_closed({xi, xf, T}, e, kNatural)) < 1e-13);
  }
}

TEST_CASE("closed kernel reduces to Mehler at a = 1/2") {
  const Setup s = at_exponent(0.5);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const double xf = random_position(rng), xi = random_position(rng), T = random_duration(rng);
    CHECK(rel(kernel_closed({xf, xi, T}, s.exps, s.params), mehler_kernel(xf, xi, T, s.params)) <= 1e-9);
  }
}

TEST_CASE("cross-side kernel vanishes at a = 1") {
  const Setup s = at_exponent(1.0);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const double x = std::abs(random_position(rng)), y = std::abs(random_position(rng)), T = random_duration(rng);
    CHECK(std::abs(kernel_closed({x, -y, T}, s.exps, s.params)) <= 1e-12);
    CHECK(std::abs(kernel_closed({x, y, T}, s.exps, s.params)) > 1e-3);
  }
}

TEST_CASE("closed kernel rejects caustic times and the origin") {
  const Exponents e = exponents_from_coupling(kNatural);
  CHECK_THROWS_AS(kernel_closed({1.0, 0.5, kPi}, e, kNatural), CausticTimeError);
  CHECK_THROWS_AS(kernel_closed({1.0, 0.5, 2.0 * kPi + 1e-12}, e, kNatural), CausticTimeError);
  CHECK_THROWS_AS(kernel_closed({0.0, 0.5, 1.0}, e, kNatural), InvalidParameter);
  CHECK_THROWS_AS(kernel_closed({1.0, 0.5, -1.0}, e, kNatural), InvalidParameter);
}

TEST_CASE("continued closed kernel agrees on the real axis") {
  const Exponents e = exponents_from_coupling(kNatural);
  for (double T : {0.3, 1.1, 2.9}) {
    CHECK(rel(kernel_closed_complex(1.0, 0.7, true, T, e, kNatural), kernel_closed({1.0, 0.7, T}, e, kNatural)) <
          1e-12);
    CHECK(rel(kernel_closed_complex(1.0, 0.7, false, T, e, kNatural), kernel_closed({-1.0, 0.7, T}, e, kNatural)) <
          1e-12);
  }
}

TEST_CASE("spectral kernel matches the closed form after epsilon extrapolation") {
  const Exponents e = exponents_from_coupling(kNatural);
  const cplx same = kernel_spectral_extrapolated(1.0, 0.7, 1.1, e, kNatural, 0.02);
  CHECK(rel(same, kernel_closed({1.0, 0.7, 1.1}, e, kNatural)) <= 1e-4);
  const cplx cross = kernel_spectral_extrapolated(-1.0, 0.7, 1.1, e, kNatural, 0.02);
  CHECK(rel(cross, kernel_closed({-1.0, 0.7, 1.1}, e, kNatural)) <= 1e-4);
}

TEST_CASE("spectral kernel at random tuples") {
  std::mt19937_64 rng(4);
  for (double a : {0.6, 0.75, 0.9}) {
    const Setup s = at_exponent(a);
    for (int i = 0; i < 3; ++i) {
      const double xf = random_position(rng), xi = random_position(rng), T = random_duration(rng);
      CHECK(rel(kernel_spectral_extrapolated(xf, xi, T, s.exps, s.params), kernel_closed({xf, xi, T}, s.exps, s.params)) <=
            1e-3);
    }
  }
}

TEST_CASE("strongly damped spectral kernel keeps the two ground states") {
  const Exponents e = exponents_from_coupling(kNatural);
  const SpectralKernel two = kernel_spectral({1.0, 0.7, 1.1, 5.0, 0}, e, kNatural);
  CHECK(std::abs(two.value - reference::kernel_two_term_eps5) <= 1e-8 * std::abs(reference::kernel_two_term_eps5));
  const SpectralKernel full = kernel_spectral({1.0, 0.7, 1.1, 5.0, -1}, e, kNatural);
  CHECK(full.n_max == 8);
  // the omitted modes are damped by at least e^{-epsilon} relative to the ground terms
  CHECK(std::abs(full.value - two.value) <= 2.0 * std::exp(-5.0) * std::abs(two.value) * 3.0);
  CHECK(full.tail_estimate < 1e-15);
  CHECK_THROWS_AS(kernel_spectral({1.0, 0.7, 1.1, 0.0, 5}, e, kNatural), InvalidParameter);
}

TEST_CASE("richardson extrapolation removes linear and quadratic terms") {
  auto f = [](double eps) { return cplx(2.0 + 3.0 * eps - 5.0 * eps * eps, -1.0 + eps * eps); };
  const cplx r = richardson_epsilon(f(0.1), f(0.05), f(0.025));
  CHECK(std::abs(r - cplx(2.0, -1.0)) < 1e-14);
}

TEST_CASE("semigroup property by contour rotation") {
  const Exponents e = exponents_from_coupling(kNatural);
  const double T1 = 0.4, T2 = 0.4;
  const cplx rot = std::polar(1.0, kPi / 4.0);
  const quad::Rule rule = quad::half_line_rule(8.0, 0.5, 4, 6);
  for (auto [xf, xi] : {std::pair{1.0, 0.7}, std::pair{-1.2, 0.5}, std::pair{0.3, -1.9}}) {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const cplx r = rule.nodes[j] * rot;
      for (bool right : {true, false}) {
        const bool sf = (xf > 0) == right, si = (xi > 0) == right;
        sum += rule.weights[j] * rot * kernel_closed_complex(std::abs(xf), r, sf, T2, e, kNatural) *
               kernel_closed_complex(r, std::abs(xi), si, T1, e, kNatural);
      }
    }
    CHECK(rel(sum, kernel_closed({xf, xi, T1 + T2}, e, kNatural)) <= 2e-3);
  }
}

TEST_CASE("caustic weights") {
  const CausticWeights h = caustic_weights(1, 0.5);
  CHECK(std::abs(h.same_side) < 1e-16);
  CHECK(std::abs(h.mirror - cplx(0.0, -1.0)) < 1e-16);
  for (int k = 1; k <= 5; ++k) {
    const CausticWeights c = caustic_weights(k, 1.0);
    CHECK(std::abs(std::abs(c.same_side) - 1.0) < 1e-16);
    CHECK(std::abs(c.mirror) < 1e-16);
  }
  const CausticWeights q = caustic_weights(2, 0.75);
  CHECK(std::abs(q.same_side) < 1e-16);
  CHECK(std::abs(std::abs(q.mirror) - 1.0) < 1e-16);
  for (double a : {0.5, 0.6, 0.75, 0.9, 1.0}) {
    for (int k = 1; k <= 6; ++k) {
      const CausticWeights c = caustic_weights(k, a);
      CHECK(std::abs(std::norm(c.same_side) + std::norm(c.mirror) - 1.0) < 1e-15);
    }
  }
  CHECK_THROWS_AS(caustic_weights(0, 0.75), InvalidParameter);
  CHECK_THROWS_AS(caustic_weights(1, 0.4), InvalidParameter);
}

TEST_CASE("spectral evolution approaches the caustic weights weakly") {
  // A narrow right-side Gaussian propagated to T -> k pi approaches
  // same_side * phi(x) + mirror * phi(-x).
  const Exponents e = exponents_from_coupling(kNatural);
  auto phi = [](double x) { return cplx(x > 0.0 ? std::exp(-std::pow((x - 2.0) / 0.3, 2)) : 0.0); };
  const Expansion ex = expand(phi, e, kNatural, 120, 1e-6);
  for (int k : {1, 2, 3}) {
    const CausticWeights w = caustic_weights(k, e.a);
    double prev = INFINITY;
    for (double delta : {1e-2, 1e-4, 1e-6}) {
      const WavePacket p = evolve(ex.packet, k * kPi - delta);
      double err = 0.0;
      for (double x = 1.0; x <= 3.0; x += 0.05) {
        err = std::max(err, std::abs(packet_value(p, x) - w.same_side * phi(x)));
        err = std::max(err, std::abs(packet_value(p, -x) - w.mirror * phi(x)));
      }
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev <= 1e-3);
  }
}
