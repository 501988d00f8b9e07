#pragma once

#include "selfforce/geometry.hpp"
#include "selfforce/trajectory.hpp"

namespace selfforce {

// Which part of the force on the displaced sphere is evaluated.
//
// The physical setup leaves a fixed neutralizing body (the "hole" charge
// distribution) at the original location, so the displaced sphere feels
// both its own retarded field (self part) and the electrostatic pull of the
// neutralizer.  The decomposition is exact and additive:
//   total = self + electrostatic.
enum class ForceComponent {
  total_with_neutralizer,
  self_force_only,
  electrostatic_only,
};

// Force response to a steplike displacement, resolved in emission time:
// f(t1) is the weight with which the displacement state at time t1
// contributes to the force at observation time T (units 1/length^3, domain
// 0 < t1 < T).  With chi = (T - t1)/R:
//
//   total:          f = -1/R^3 - (1 / 2R^3)(2 - chi)(2 - 2 chi - chi^2) Theta(2 - chi)
//   self:           the Theta term alone
//   electrostatic:  -1/R^3
//
// f(T-) = -3/R^3 (Coulomb restoring limit), and f = -1/R^3 once the
// emission time is more than a light-crossing 2R in the past.
double eval_f(double t1, double T, const SphereBody& body,
              ForceComponent component = ForceComponent::total_with_neutralizer);

// Time-averaged force response per unit displacement for a steplike
// displacement of window length T (units 1/length^4):
//
//   Axx(T) = -1/(R^4 kappa) - (1 / 8 R^4 kappa)(4 + kappa)(2 - kappa)^2 Theta(2 - kappa),
//
// kappa = T/R.  For kappa >= 2 this is exactly -1/(R^3 T): once the window
// outlasts the light-crossing time the average is purely electrostatic.
// The average steplike force is F_avg = rho^2 V^2 D_x Axx(T).
// Throws DomainError for T <= 0.
double eval_Axx(double T, const SphereBody& body,
                ForceComponent component = ForceComponent::total_with_neutralizer);

// Force response to an impulsive (delta) velocity kick, split into a delta
// term at zero delay plus a smooth aftereffect supported on one
// light-crossing:
//
//   g(t) = impulse_coefficient * delta(t) + smooth(t),
//   smooth(t) = (3 / 2R^4)(2 - (t/R)^2)   on 0 <= t <= 2R, else 0.
//
// impulse_coefficient: -3/R^3 (total), -2/R^3 (self), -1/R^3
// (electrostatic).  Only the delta weight depends on the component; the
// smooth aftereffect is purely retarded self-interaction (absent for the
// electrostatic part).
struct ImpulseSmoothKernel {
  double impulse_coefficient = 0.0;  // multiplies delta(t), units 1/length^3
  double radius = 0.0;
  bool has_smooth = false;

  double smooth(double t) const;  // units 1/length^4
  double support_end() const { return 2.0 * radius; }
};

ImpulseSmoothKernel kernel_g(const SphereBody& body,
                             ForceComponent component = ForceComponent::total_with_neutralizer);

// Result of a force evaluation.  `value` is the physical force
// (charge^2/length^2 with c = 1); `normalized` divides out rho^2 V^2 D_x,
// giving the amplitude-independent response shape (units 1/length^3 for
// instantaneous forces and for averages alike).  normalized is computed from
// the dimensionless profile directly, so it is well defined at zero
// amplitude, where value is exactly 0.
struct ForceResult {
  double value = 0.0;
  double normalized = 0.0;
  ForceComponent component = ForceComponent::total_with_neutralizer;
  int series_terms_used = 0;
  double truncation_estimate = 0.0;
};

// Window-averaged force (1/T) Integral_0^T F dt2 for a smooth trajectory,
// evaluated by the Taylor-in-derivatives series: each one-sided profile
// derivative D^(n)(0+) contributes a closed-form polynomial weight in
// kappa = T/R.  Terms are added until two consecutive terms fall below
// tol * |accumulated sum| (compensated summation); ConvergenceError is
// thrown if that does not happen within n_max terms.
ForceResult avg_force_series(const Trajectory& trajectory, const SphereBody& body,
                             ForceComponent component = ForceComponent::total_with_neutralizer,
                             double tol = 1e-10, int n_max = 80);

// Instantaneous force F(t2) for a smooth trajectory, same series idea
// resolved in observation time.  Causality and support are exact: for
// t2 < 0 and t2 >= T + 2R the result is exactly zero (no series is
// evaluated).  Between T and T + 2R only the retarded tail contributes.
ForceResult force_at_time_series(const Trajectory& trajectory, double t2,
                                 const SphereBody& body,
                                 ForceComponent component = ForceComponent::total_with_neutralizer,
                                 double tol = 1e-10, int n_max = 80);

// Instantaneous force from the expansion in *current* profile derivatives
// D^(n)(t2) (no memory of the window opening).  Valid strictly inside the
// window, 0 < t2 < T; throws DomainError outside.  Once t2 > 2R the early
// transient has passed and the series reduces to the local
// radiation-reaction form whose m-th damping coefficient is
// pair_moment(m); the leading terms are the Coulomb restoring force and
// the standard radiation-reaction derivative ladder.
ForceResult force_current_derivatives(const Trajectory& trajectory, double t2,
                                      const SphereBody& body,
                                      ForceComponent component = ForceComponent::total_with_neutralizer,
                                      double tol = 1e-10, int n_max = 80);

// Closed-form normalized responses for the steplike profile (the series
// machinery assumes a smooth profile; the steplike case collapses to these
// n = 0 expressions and is computed from them directly).  Both are the
// force divided by rho^2 V^2 D_x, units 1/length^3:
//
//   step_phi_avg(T)  = T * Axx(T)          (equals -1/R^3 for T >= 2R)
//   step_phi_at(t2)  = piecewise cubic in t2, exactly 0 outside [0, T + 2R)
double step_phi_avg(double T, const SphereBody& body,
                    ForceComponent component = ForceComponent::total_with_neutralizer);
double step_phi_at(double t2, double T, const SphereBody& body,
                   ForceComponent component = ForceComponent::total_with_neutralizer);

}  // namespace selfforce
