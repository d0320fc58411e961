#include "isq/classical.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace isq::classical {

namespace {

double acceleration(double x, const PhysicalParams& p) {
  return -p.omega * p.omega * x + 2.0 * p.g / (p.m * x * x * x);
}

struct Bracket {
  double amplitude;
  double offset;
};

Bracket orbit_terms(double E, const PhysicalParams& p) {
  const double mw2 = p.m * p.omega * p.omega;
  const double disc = E * E - 2.0 * p.g * mw2;
  if (disc < -1e-14 * E * E) throw InvalidParameter("energy below the potential minimum");
  // Differences at the rounding level of E^2 are the minimum-energy orbit.
  const double amp = disc <= 8.0 * std::numeric_limits<double>::epsilon() * E * E ? 0.0 : std::sqrt(disc);
  return {amp / mw2, E / mw2};
}

}  // namespace

double potential(double x, const PhysicalParams& p) {
  if (x == 0.0) throw InvalidParameter("the potential is singular at x = 0");
  return 0.5 * p.m * p.omega * p.omega * x * x + p.g / (x * x);
}

double energy(const ClassicalState& s, const PhysicalParams& p) { return 0.5 * p.m * s.v * s.v + potential(s.x, p); }

double minimum_energy(const PhysicalParams& p) { return p.omega * std::sqrt(2.0 * p.g * p.m); }

double equilibrium_radius(const PhysicalParams& p) { return std::pow(2.0 * p.g / (p.m * p.omega * p.omega), 0.25); }

double closed_form_trajectory(double E, double t0, int sign, double t, const PhysicalParams& p) {
  if (sign != 1 && sign != -1) throw InvalidParameter("branch sign must be +1 or -1");
  const Bracket b = orbit_terms(E, p);
  const double inner = b.amplitude * std::sin(2.0 * p.omega * (t + t0)) + b.offset;
  return sign * std::sqrt(std::max(inner, 0.0));
}

double closed_form_velocity(double E, double t0, int sign, double t, const PhysicalParams& p) {
  const Bracket b = orbit_terms(E, p);
  const double x = closed_form_trajectory(E, t0, sign, t, p);
  return p.omega * b.amplitude * std::cos(2.0 * p.omega * (t + t0)) / x;
}

ClassicalState closed_form_state(double E, double t0, int sign, double t, const PhysicalParams& p) {
  return {closed_form_trajectory(E, t0, sign, t, p), closed_form_velocity(E, t0, sign, t, p), t};
}

std::vector<ClassicalState> integrate_trajectory(const ClassicalState& initial, double dt, int steps,
                                                 const PhysicalParams& p) {
  if (initial.x == 0.0) throw InvalidParameter("initial position must be non-zero");
  if (!(dt > 0.0) || steps < 0) throw InvalidParameter("need dt > 0 and steps >= 0");
  std::vector<ClassicalState> path;
  path.reserve(static_cast<std::size_t>(steps) + 1);
  path.push_back(initial);
  ClassicalState s = initial;
  for (int i = 0; i < steps; ++i) {
    const double k1x = s.v;
    const double k1v = acceleration(s.x, p);
    const double k2x = s.v + 0.5 * dt * k1v;
    const double k2v = acceleration(s.x + 0.5 * dt * k1x, p);
    const double k3x = s.v + 0.5 * dt * k2v;
    const double k3v = acceleration(s.x + 0.5 * dt * k2x, p);
    const double k4x = s.v + dt * k3v;
    const double k4v = acceleration(s.x + dt * k3x, p);
    const double x_new = s.x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    if (x_new == 0.0 || (x_new > 0.0) != (s.x > 0.0)) {
      throw std::runtime_error("integration step crossed x = 0; reduce dt");
    }
    s.v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    s.x = x_new;
    s.t = initial.t + (i + 1) * dt;
    path.push_back(s);
  }
  return path;
}

double period_from_maxima(const std::vector<ClassicalState>& path) {
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    const double xm = std::abs(path[i - 1].x);
    const double x0 = std::abs(path[i].x);
    const double xp = std::abs(path[i + 1].x);
    if (x0 > xm && x0 >= xp) {
      const double h = path[i + 1].t - path[i].t;
      const double curv = xm - 2.0 * x0 + xp;
      const double shift = curv != 0.0 ? 0.5 * (xm - xp) / curv : 0.0;
      peaks.push_back(path[i].t + shift * h);
    }
  }
  if (peaks.size() < 2) throw std::runtime_error("fewer than two maxima in trajectory");
  return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

}  // namespace isq::classical
