#include "isq/spectrum.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "isq/specfun.hpp"

namespace isq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_noninteger_c2(const Exponents& exps) {
  if (specfun::is_gamma_pole(exps.c2)) {
    throw InvalidParameter("spectral function undefined when c2 is a non-positive integer (a = 1)");
  }
}

// Refine a sign change of F - target on [lo, hi] down to adjacent doubles.
double bisect(const Exponents& exps, double target, double lo, double hi, double g_lo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const SpectralFunctionValue f = spectral_function(mid, exps);
    const double g = f.is_pole ? kInf : f.value - target;
    if (g == 0.0) return mid;
    if ((g > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string interval_text(double lo, double hi) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << lo << ", " << hi << "]";
  return os.str();
}

}  // namespace

std::string to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

SpectralFunctionValue spectral_function(double lambda, const Exponents& exps) {
  require_noninteger_c2(exps);
  SpectralFunctionValue out;
  out.lambda = lambda;
  const specfun::GammaValue num = specfun::log_gamma(0.5 * (exps.c1 - lambda));
  const specfun::GammaValue den = specfun::log_gamma(0.5 * (exps.c2 - lambda));
  if (num.is_pole) {
    out.is_pole = true;
    out.value = kInf;
    return out;
  }
  if (den.is_pole) {
    out.is_zero = true;
    out.value = 0.0;
    return out;
  }
  const specfun::GammaValue g2 = specfun::log_gamma(exps.c2);
  const specfun::GammaValue g1 = specfun::log_gamma(exps.c1);
  const int sign = num.sign * den.sign * g2.sign * g1.sign;
  out.value = sign * std::exp(num.log_abs - den.log_abs + g2.log_abs - g1.log_abs);
  return out;
}

double spectral_target(const Exponents& exps, double L, const PhysicalParams& params) {
  if (std::isinf(L)) return 0.0;
  if (L == 0.0) return kInf;
  return params.length_scale() * (exps.c1 - exps.c2) / L;
}

SpectrumResult solve_spectrum(const Exponents& exps, double L, int n_max, const PhysicalParams& params,
                              Branch branch, const SpectrumOptions& options) {
  if (n_max < 0) throw InvalidParameter("n_max must be non-negative");
  if (std::isnan(L)) throw InvalidParameter("extension length is NaN");
  SpectrumResult res;
  res.branch = branch;
  res.L = L;
  res.target = spectral_target(exps, L, params);
  const auto count = static_cast<std::size_t>(n_max) + 1;
  if (std::isinf(L) || L == 0.0) {
    const double base = std::isinf(L) ? exps.c2 : exps.c1;
    for (int n = 0; n <= n_max; ++n) res.levels.push_back(2.0 * n + base);
    return res;
  }
  require_noninteger_c2(exps);
  if (options.scan_points < 2) throw InvalidParameter("scan_points must be at least 2");

  const double target = res.target;
  const double lambda_max = 2.0 * n_max + 4.0;
  // Poles of F sit at c1 + 2k. Between consecutive poles F runs from +inf to
  // -inf; the first interval starts at the search floor instead.
  for (int k = -1; res.levels.size() < count; ++k) {
    const double lo = k < 0 ? options.lambda_floor : exps.c1 + 2.0 * k;
    const double hi = exps.c1 + 2.0 * (k + 1);
    if (lo >= lambda_max) break;
    double g_prev = k < 0 ? spectral_function(lo, exps).value - target : kInf;
    double x_prev = lo;
    int changes = 0;
    double br_lo = 0.0;
    double br_hi = 0.0;
    double br_g = 0.0;
    const int n = options.scan_points;
    for (int j = 1; j <= n; ++j) {
      const double x = j < n ? lo + (hi - lo) * j / n : hi;
      const SpectralFunctionValue f = spectral_function(x, exps);
      const double g = j < n ? (f.is_pole ? kInf : f.value - target) : -kInf;
      if ((g > 0.0) != (g_prev > 0.0)) {
        ++changes;
        br_lo = x_prev;
        br_hi = x;
        br_g = g_prev;
      }
      g_prev = g;
      x_prev = x;
    }
    if (changes == 0 && k < 0) continue;  // F(floor) < target: no root above the floor
    if (changes != 1) {
      throw RootCountError("expected one root of the spectral condition in " + interval_text(lo, hi) + ", found " +
                               std::to_string(changes),
                           lo, hi, changes);
    }
    res.levels.push_back(bisect(exps, target, br_lo, br_hi, br_g));
  }
  return res;
}

SpectralFamily spectral_family(const BoundaryData& bd, const Exponents& exps, int n_max,
                               const PhysicalParams& params, const SpectrumOptions& options) {
  SpectralFamily fam;
  fam.plus = solve_spectrum(exps, bd.L_plus, n_max, params, Branch::plus, options);
  fam.minus = solve_spectrum(exps, bd.L_minus, n_max, params, Branch::minus, options);
  for (std::size_t i = 0; i < fam.plus.levels.size(); ++i) {
    for (std::size_t j = 0; j < fam.minus.levels.size(); ++j) {
      if (std::abs(fam.plus.levels[i] - fam.minus.levels[j]) <= 1e-9) {
        fam.degenerate.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return fam;
}

}  // namespace isq
