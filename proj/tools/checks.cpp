#include "checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "isq/classical.hpp"
#include "isq/dynamics.hpp"
#include "isq/propagator.hpp"
#include "isq/specfun.hpp"
#include "isq/spectrum.hpp"

namespace isq::app {

namespace {

const PhysicalParams kNatural{1.0, 1.0, 1.0, 5.0 / 32.0};

struct Outcome {
  bool passed;
  std::string detail;
};

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

Outcome within(const std::string& what, double value, double tol) {
  return {value <= tol, what + " = " + sci(value) + " (tol " + sci(tol) + ")"};
}

Outcome all_of(std::vector<Outcome> parts) {
  Outcome o{true, ""};
  for (auto& p : parts) {
    o.passed = o.passed && p.passed;
    o.detail += (o.detail.empty() ? "" : "; ") + p.detail;
  }
  return o;
}

struct Setup {
  PhysicalParams params;
  Exponents exps;
};

Setup at_exponent(double a) {
  PhysicalParams p = kNatural;
  p.g = coupling_for_exponent(a, p);
  const bool limit = a == 0.5 || a == 1.0;
  return {p, exponents_from_coupling(p, limit ? CouplingMode::limit_test : CouplingMode::tunneling)};
}

double rel(cplx x, cplx y) { return std::abs(x - y) / std::abs(y); }

double random_position(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.2, 2.5);
  std::bernoulli_distribution neg(0.5);
  const bool flip = neg(rng);
  const double x = d(rng);
  return flip ? -x : x;
}

// Off-caustic: omega T at least 0.2 away from multiples of pi.
double random_duration(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.2, kPi - 0.2);
  std::uniform_int_distribution<int> k(0, 2);
  const double base = d(rng);
  return base + kPi * k(rng);
}

Outcome closed_form_spectra(Profile) {
  const Exponents e = exponents_from_coupling(kNatural);
  const int n_max = 10;
  const SpectralFamily fam = spectral_family(decompose_unitary(pauli_sigma1()), e, n_max, kNatural);
  std::vector<double> got = fam.plus.levels;
  got.insert(got.end(), fam.minus.levels.begin(), fam.minus.levels.end());
  std::sort(got.begin(), got.end());
  std::vector<double> want;
  for (int n = 0; n <= n_max; ++n) {
    want.push_back(2.0 * n + e.c1);
    want.push_back(2.0 * n + e.c2);
  }
  std::sort(want.begin(), want.end());
  if (got.size() != want.size()) return {false, "level count " + std::to_string(got.size())};
  double err = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) err = std::max(err, std::abs(got[i] - want[i]));
  const double first[] = {0.25, 1.75, 2.25, 3.75, 4.25};
  for (int i = 0; i < 5; ++i) err = std::max(err, std::abs(got[i] - first[i]));
  return within("max |lambda - ladder|", err, 1e-12);
}

int sign_changes(const Exponents& e, double lo, double hi, double target, int points) {
  int changes = 0;
  double prev = spectral_function(lo, e).value - target;
  for (int i = 1; i <= points; ++i) {
    const double lam = lo + (hi - lo) * i / points;
    const double cur = spectral_function(lam, e).value - target;
    if (std::isfinite(prev) && std::isfinite(cur) && (prev < 0.0) != (cur < 0.0)) ++changes;
    prev = cur;
  }
  return changes;
}

Outcome generic_spectra(Profile) {
  const Exponents e = exponents_from_coupling(kNatural);
  const int n_max = 20;
  const SpectrumResult r = solve_spectrum(e, 1.0, n_max, kNatural);
  if (static_cast<int>(r.levels.size()) != n_max + 1) return {false, "level count " + std::to_string(r.levels.size())};
  double worst = 0.0;
  for (double lam : r.levels) worst = std::max(worst, std::abs(spectral_function(lam, e).value - r.target));
  // Bracketing intervals: below the first pole, then between consecutive poles.
  int bad_intervals = 0;
  for (int n = 0; n <= n_max; ++n) {
    const double lo = n == 0 ? isq::SpectrumOptions{}.lambda_floor : e.c1 + 2.0 * (n - 1) + 1e-9;
    const double hi = e.c1 + 2.0 * n - 1e-9;
    const bool inside = r.levels[n] > lo && r.levels[n] < hi;
    if (!inside || sign_changes(e, lo, hi, r.target, 10000) != 1) ++bad_intervals;
  }
  return all_of({within("max |F - target|", worst, 1e-10),
                 {bad_intervals == 0, "intervals without exactly one root: " + std::to_string(bad_intervals)}});
}

Outcome oscillator_limit(Profile) {
  const PhysicalParams p{1.0, 1.0, 1.0, 1e-10};
  const Exponents e = exponents_from_coupling(p);
  double worst = 0.0;
  // Lowest six levels: series 2 (even, c2 ~ 1/2) and series 1 (odd, c1 ~ 3/2) alternate.
  for (int k = 0; k < 6; ++k) {
    const int s = k % 2 == 0 ? 2 : 1;
    const int n = k / 2;
    const Eigenstate st = sigma1_eigenstate(n, s, e, p);
    const double hn = 1.0 / std::sqrt(std::ldexp(1.0, k) * std::tgamma(k + 1.0) * std::sqrt(kPi));
    auto herm = [&](double x) { return hn * specfun::hermite(k, x) * std::exp(-0.5 * x * x); };
    const double sign = st.value(0.3).real() * herm(0.3) > 0.0 ? 1.0 : -1.0;
    for (int i = 0; i <= 990; ++i) {
      const double x = 0.05 + 0.005 * i;
      worst = std::max(worst, std::abs(sign * st.value(x) - herm(x)));
    }
  }
  return within("max |psi - hermite function|", worst, 1e-4);
}

Outcome orthonormality(Profile profile) {
  const Exponents e = exponents_from_coupling(kNatural);
  const int per_series = profile == Profile::strict ? 10 : 4;
  std::vector<Eigenstate> states;
  for (int s : {1, 2})
    for (int n = 0; n < per_series; ++n) states.push_back(sigma1_eigenstate(n, s, e, kNatural));
  double worst = 0.0;
  const double lambda_max = 2.0 * per_series + 2.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i; j < states.size(); ++j) {
      const cplx g = inner_product([&](double x) { return states[i].value(x); },
                                   [&](double x) { return states[j].value(x); }, kNatural, lambda_max);
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return within(std::to_string(states.size()) + "x" + std::to_string(states.size()) + " Gram max |G - I|", worst,
                1e-8);
}

Outcome kernel_cross_validation(Profile profile, std::uint64_t seed) {
  std::mt19937_64 rng(seed + 5);
  const int tuples = profile == Profile::strict ? 10 : 3;
  double worst = 0.0;
  for (double a : {0.6, 0.75, 0.9}) {
    const Setup s = at_exponent(a);
    for (int i = 0; i < tuples; ++i) {
      const double xf = random_position(rng);
      const double xi = random_position(rng);
      const double T = random_duration(rng);
      const cplx closed = kernel_closed({xf, xi, T}, s.exps, s.params);
      worst = std::max(worst, rel(kernel_spectral_extrapolated(xf, xi, T, s.exps, s.params), closed));
    }
  }
  return within("max relative difference", worst, 1e-3);
}

Outcome oscillator_propagator(Profile, std::uint64_t seed) {
  std::mt19937_64 rng(seed + 6);
  const Setup s = at_exponent(0.5);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double xf = random_position(rng);
    const double xi = random_position(rng);
    const double T = random_duration(rng);
    worst = std::max(worst, rel(kernel_closed({xf, xi, T}, s.exps, s.params), mehler_kernel(xf, xi, T, s.params)));
  }
  return within("max relative difference", worst, 1e-9);
}

Outcome conventional_limit(Profile, std::uint64_t seed) {
  std::mt19937_64 rng(seed + 7);
  const Setup s = at_exponent(1.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double xf = std::abs(random_position(rng));
    const double xi = -std::abs(random_position(rng));
    const double T = random_duration(rng);
    worst = std::max(worst, std::abs(kernel_closed({xf, xi, T}, s.exps, s.params)));
    worst = std::max(worst, std::abs(kernel_closed({xi, xf, T}, s.exps, s.params)));
  }
  return within("max |K| across the origin", worst, 1e-12);
}

Outcome tunneling_current(Profile profile, std::uint64_t seed) {
  const Exponents e = exponents_from_coupling(kNatural);
  std::mt19937_64 rng(seed + 8);
  std::normal_distribution<double> nd(0.0, 1.0);
  auto random_coeffs = [&](int n) {
    std::vector<cplx> c(static_cast<std::size_t>(n));
    for (auto& v : c) {
      const double re = nd(rng);
      const double im = nd(rng);
      v = cplx(re, im);
    }
    return c;
  };
  const int packets = profile == Profile::strict ? 5 : 2;
  double min_mixed = INFINITY, sym = 0.0, single = 0.0, numeric = 0.0;
  const double r = std::sqrt(0.5);
  std::vector<WavePacket> mixed{make_packet({r}, {cplx(0.0, r)}, e, kNatural)};
  for (int i = 0; i < packets; ++i) {
    const auto c1 = random_coeffs(5);
    const auto c2 = random_coeffs(5);
    mixed.push_back(evolve(make_packet(c1, c2, e, kNatural), 0.37 * (i + 1)));
  }
  for (const WavePacket& p : mixed) {
    const double jp = probability_current_at_origin(p, 1);
    const double jm = probability_current_at_origin(p, -1);
    min_mixed = std::min(min_mixed, std::abs(jp));
    sym = std::max(sym, std::abs(jp - jm));
    for (int side : {1, -1}) {
      numeric = std::max(numeric, std::abs(probability_current_extrapolated(p, side) - jp) / std::abs(jp));
    }
  }
  for (int i = 0; i < packets; ++i) {
    const auto c = random_coeffs(6);
    for (const WavePacket& p : {make_packet(c, {}, e, kNatural), make_packet({}, c, e, kNatural)}) {
      const WavePacket q = evolve(p, 0.8 * i);
      for (int side : {1, -1}) single = std::max(single, std::abs(probability_current_at_origin(q, side)));
    }
  }
  return all_of({{min_mixed > 1e-6, "min |j(+0)| mixed = " + sci(min_mixed)},
                 within("max |j(+0) - j(-0)|", sym, 1e-8),
                 within("max |j| single-series", single, 1e-10),
                 within("max analytic/numeric relative difference", numeric, 1e-4)});
}

Outcome caustic_copy(Profile) {
  std::vector<Outcome> parts;
  for (int k : {1, 2}) {
    const CopyReport rep = copy_experiment(0.5, 2.0, 0.75, k, 80, kNatural);
    const double right = k == 1 ? 0.5 : 0.0;
    const double left = k == 1 ? 0.5 : 1.0;
    const double split = std::max(std::abs(rep.mass_right - right), std::abs(rep.mass_left - left));
    parts.push_back(within("k=" + std::to_string(k) + " L1", rep.l1_error, 1e-3));
    parts.push_back(within("k=" + std::to_string(k) + " mass split", split, 1e-3));
  }
  return all_of(parts);
}

Outcome classical_caustics(Profile profile, std::uint64_t seed) {
  using namespace isq::classical;
  std::mt19937_64 rng(seed + 10);
  std::uniform_real_distribution<double> energy(1.05 * minimum_energy(kNatural), 5.0), phase(0.0, kPi);
  std::bernoulli_distribution neg(0.5);
  const double dt = profile == Profile::strict ? 1e-4 : 1e-3;
  const int per_period = static_cast<int>(std::round(kPi / dt));
  double traj = 0.0, period = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double E = energy(rng);
    const double t0 = phase(rng);
    const int sign = neg(rng) ? -1 : 1;
    const auto path = integrate_trajectory(closed_form_state(E, t0, sign, 0.0, kNatural), dt, 3 * per_period, kNatural);
    for (int j = 0; j <= per_period; ++j) {
      traj = std::max(traj, std::abs(path[j].x - closed_form_trajectory(E, t0, sign, path[j].t, kNatural)));
    }
    std::vector<ClassicalState> signed_path = path;
    for (auto& st : signed_path) st.x *= sign;
    period = std::max(period, std::abs(period_from_maxima(signed_path) - kPi));
  }
  return all_of({within("max |x_rk4 - x_closed| over one period", traj, 1e-6),
                 within("max |period - pi/omega|", period, 1e-6)});
}

Outcome dispatch(int id, Profile profile, std::uint64_t seed) {
  switch (id) {
    case 1: return closed_form_spectra(profile);
    case 2: return generic_spectra(profile);
    case 3: return oscillator_limit(profile);
    case 4: return orthonormality(profile);
    case 5: return kernel_cross_validation(profile, seed);
    case 6: return oscillator_propagator(profile, seed);
    case 7: return conventional_limit(profile, seed);
    case 8: return tunneling_current(profile, seed);
    case 9: return caustic_copy(profile);
    case 10: return classical_caustics(profile, seed);
    default: throw std::out_of_range("no acceptance criterion " + std::to_string(id));
  }
}

}  // namespace

const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> list{
      {1, "closed-form spectra", 1.0},
      {2, "generic-L spectra", 5.0},
      {3, "harmonic-oscillator eigenfunction limit", 10.0},
      {4, "orthonormality", 30.0},
      {5, "kernel cross-validation", 60.0},
      {6, "harmonic-oscillator propagator limit", 1.0},
      {7, "conventional limit", 1.0},
      {8, "tunneling current", 10.0},
      {9, "caustics copy", 120.0},
      {10, "classical caustics", 5.0},
  };
  return list;
}

CheckResult run_criterion(int id, Profile profile, std::uint64_t seed) {
  const auto& list = acceptance_criteria();
  const auto it = std::find_if(list.begin(), list.end(), [&](const Criterion& c) { return c.id == id; });
  if (it == list.end()) throw std::out_of_range("no acceptance criterion " + std::to_string(id));
  CheckResult res;
  res.id = id;
  res.name = it->name;
  res.budget_seconds = it->budget_seconds;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome o = dispatch(id, profile, seed);
    res.passed = o.passed;
    res.detail = o.detail;
  } catch (const std::exception& e) {
    res.passed = false;
    res.detail = std::string("exception: ") + e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (res.seconds > res.budget_seconds) {
    res.passed = false;
    res.detail += "; runtime " + sci(res.seconds) + " s over budget " + sci(res.budget_seconds) + " s";
  }
  return res;
}

std::vector<CheckResult> run_acceptance(Profile profile, std::uint64_t seed,
                                        const std::function<void(const CheckResult&)>& on_result) {
  std::vector<CheckResult> out;
  for (const Criterion& c : acceptance_criteria()) {
    out.push_back(run_criterion(c.id, profile, seed));
    if (on_result) on_result(out.back());
  }
  return out;
}

}  // namespace isq::app
