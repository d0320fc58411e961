#pragma once

// Classical motion in V(x) = m omega^2 x^2/2 + g/x^2: closed-form orbit and a
// fixed-step RK4 integrator used as an independent check.

#include <vector>

#include "isq/model.hpp"

namespace isq::classical {

struct ClassicalState {
  double x = 1.0;
  double v = 0.0;
  double t = 0.0;
};

double potential(double x, const PhysicalParams& params);
double energy(const ClassicalState& state, const PhysicalParams& params);

/// omega sqrt(2 g m): the bottom of the potential well.
double minimum_energy(const PhysicalParams& params);
/// (2g/(m omega^2))^{1/4}.
double equilibrium_radius(const PhysicalParams& params);

/// x(t) = sign * { sqrt(E^2 - 2 g m omega^2)/(m omega^2) sin(2 omega (t + t0)) + E/(m omega^2) }^{1/2}.
double closed_form_trajectory(double E, double t0, int sign, double t, const PhysicalParams& params);
/// dx/dt of the closed-form orbit.
double closed_form_velocity(double E, double t0, int sign, double t, const PhysicalParams& params);
/// Initial state of the closed-form orbit at time t.
ClassicalState closed_form_state(double E, double t0, int sign, double t, const PhysicalParams& params);

/// Fixed-step RK4 for x'' = -omega^2 x + 2 g/(m x^3). Returns steps + 1
/// states including the initial one. Throws if a step crosses x = 0.
std::vector<ClassicalState> integrate_trajectory(const ClassicalState& initial, double dt, int steps,
                                                 const PhysicalParams& params);

/// Mean spacing of successive maxima of x(t) (parabolic interpolation of
/// the sampled peaks). Throws if fewer than two maxima are present.
double period_from_maxima(const std::vector<ClassicalState>& path);

}  // namespace isq::classical
