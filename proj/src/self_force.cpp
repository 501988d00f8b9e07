#include "selfforce/self_force.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selfforce/accumulation.hpp"
#include "selfforce/errors.hpp"

namespace selfforce {

namespace {

// Delta-term weight of the impulse response, in units of 1/R^3: the
// electrostatic pull of the neutralizer contributes -1, the instantaneous
// part of the retarded self-interaction -2.
double impulse_weight(ForceComponent component) {
  switch (component) {
    case ForceComponent::total_with_neutralizer:
      return -3.0;
    case ForceComponent::self_force_only:
      return -2.0;
    case ForceComponent::electrostatic_only:
      return -1.0;
  }
  return 0.0;
}

void check_duration(double T, const char* who) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw DomainError(std::string(who) +
                      ": window length must be positive and finite, got " +
                      std::to_string(T));
  }
}

void check_series_controls(double tol, int n_max, const char* who) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw DomainError(std::string(who) + ": tolerance must be positive");
  }
  if (n_max < 1) {
    throw DomainError(std::string(who) + ": n_max must be >= 1");
  }
}

// Accumulates series terms with compensated summation and decides
// convergence: once at least one nonzero term has been seen, the series is
// converged when the last three terms are all below tol * scale, where the
// scale is the accumulated sum but never less than a fraction of the
// Coulomb magnitude 1/R^3 (so the stop rule stays meaningful when the sum
// itself passes through zero).  A profile whose derivatives are all zero is
// accepted as converged-to-zero after all_zero_cap terms.
class SeriesAccumulator {
 public:
  SeriesAccumulator(double tol, double scale_floor, int all_zero_cap)
      : tol_(tol), scale_floor_(scale_floor), all_zero_cap_(all_zero_cap) {}

  // Adds one term; returns true when the series may stop.
  bool add(double term) {
    sum_ += term;
    ++terms_;
    if (term != 0.0) {
      any_nonzero_ = true;
    }
    w2_ = w1_;
    w1_ = w0_;
    w0_ = std::abs(term);
    if (!any_nonzero_) {
      return terms_ >= all_zero_cap_;
    }
    if (terms_ < 3) {
      return false;
    }
    return window() <= tol_ * scale();
  }

  double sum() const { return sum_.value(); }
  int terms() const { return terms_; }
  double truncation_estimate() const {
    return any_nonzero_ ? window() / scale() : 0.0;
  }

 private:
  double window() const { return std::max({w0_, w1_, w2_}); }
  double scale() const {
    return std::max(std::abs(sum_.value()), scale_floor_);
  }

  double tol_;
  double scale_floor_;
  int all_zero_cap_;
  NeumaierSum sum_;
  int terms_ = 0;
  bool any_nonzero_ = false;
  double w0_ = 0.0, w1_ = 0.0, w2_ = 0.0;
};

ForceResult make_result(const Trajectory& trajectory, const SphereBody& body,
                        ForceComponent component, double normalized, int terms,
                        double truncation) {
  const double rho = body.charge_density();
  const double v = body.volume();
  ForceResult r;
  r.normalized = normalized;
  r.value = rho * rho * v * v * trajectory.amplitude() * normalized;
  r.component = component;
  r.series_terms_used = terms;
  r.truncation_estimate = truncation;
  return r;
}

}  // namespace

double eval_f(double t1, double T, const SphereBody& body,
              ForceComponent component) {
  check_duration(T, "eval_f");
  if (!(t1 > 0.0) || !(t1 < T)) {
    throw DomainError("eval_f: emission time must lie strictly inside the window, got t1 = " +
                      std::to_string(t1));
  }
  const double r = body.radius();
  const double r3 = r * r * r;
  const double chi = (T - t1) / r;

  const double electrostatic = -1.0 / r3;
  double self = 0.0;
  if (chi <= 2.0) {
    self = -0.5 / r3 * (2.0 - chi) * (2.0 - 2.0 * chi - chi * chi);
  }
  switch (component) {
    case ForceComponent::total_with_neutralizer:
      return electrostatic + self;
    case ForceComponent::self_force_only:
      return self;
    case ForceComponent::electrostatic_only:
      return electrostatic;
  }
  return 0.0;
}

double eval_Axx(double T, const SphereBody& body, ForceComponent component) {
  check_duration(T, "eval_Axx");
  const double r = body.radius();
  const double kappa = T / r;
  const double r4 = r * r * r * r;

  // The electrostatic average is exactly -1/(R^3 T); for kappa >= 2 the
  // retarded self-part averages away entirely and the total equals it.
  const double electrostatic = -1.0 / (r * r * r * T);
  double self = 0.0;
  if (kappa <= 2.0) {
    self = -(4.0 + kappa) * (2.0 - kappa) * (2.0 - kappa) / (8.0 * r4 * kappa);
  }
  switch (component) {
    case ForceComponent::total_with_neutralizer:
      return electrostatic + self;
    case ForceComponent::self_force_only:
      return self;
    case ForceComponent::electrostatic_only:
      return electrostatic;
  }
  return 0.0;
}

double ImpulseSmoothKernel::smooth(double t) const {
  if (!has_smooth || t < 0.0 || t > 2.0 * radius) {
    return 0.0;
  }
  const double xi = t / radius;
  const double r4 = radius * radius * radius * radius;
  return 1.5 / r4 * (2.0 - xi * xi);
}

ImpulseSmoothKernel kernel_g(const SphereBody& body, ForceComponent component) {
  const double r = body.radius();
  ImpulseSmoothKernel k;
  k.impulse_coefficient = impulse_weight(component) / (r * r * r);
  k.radius = r;
  k.has_smooth = component != ForceComponent::electrostatic_only;
  return k;
}

double step_phi_avg(double T, const SphereBody& body, ForceComponent component) {
  check_duration(T, "step_phi_avg");
  const double r = body.radius();
  const double r3 = r * r * r;
  const double kappa = T / r;

  // T * Axx(T) with the factor T folded in algebraically, which keeps the
  // electrostatic plateau exactly -1/R^3.
  const double electrostatic = -1.0 / r3;
  double self = 0.0;
  if (kappa <= 2.0) {
    self = -(4.0 + kappa) * (2.0 - kappa) * (2.0 - kappa) / (8.0 * r3);
  }
  switch (component) {
    case ForceComponent::total_with_neutralizer:
      return electrostatic + self;
    case ForceComponent::self_force_only:
      return self;
    case ForceComponent::electrostatic_only:
      return electrostatic;
  }
  return 0.0;
}

double step_phi_at(double t2, double T, const SphereBody& body,
                   ForceComponent component) {
  check_duration(T, "step_phi_at");
  const double r = body.radius();
  const double r3 = r * r * r;
  if (t2 < 0.0 || t2 >= T + 2.0 * r) {
    return 0.0;
  }
  const double kappa = t2 / r;
  const double xi = kappa - T / r;  // time past the window end, in units of R

  const double window = t2 <= T ? 1.0 : 0.0;
  double phi = impulse_weight(component) / r3 * window;
  if (component == ForceComponent::electrostatic_only) {
    return phi;
  }

  // Retarded contribution of the two window edges (the n = 0 collapse of
  // the smooth-profile series).
  double b = 0.0;
  if (kappa >= 2.0) {
    b += (kappa * kappa + 2.0 * kappa - 2.0) * (kappa - 2.0);
  }
  if (xi < 0.0) {
    b += (6.0 - kappa * kappa) * kappa;
  } else {
    b += (T / r) * ((6.0 - kappa * kappa) - xi * kappa - xi * xi);
  }
  return phi + b / (2.0 * r3);
}

ForceResult avg_force_series(const Trajectory& trajectory,
                             const SphereBody& body, ForceComponent component,
                             double tol, int n_max) {
  check_series_controls(tol, n_max, "avg_force_series");
  const double r = body.radius();
  const double T = trajectory.duration();
  const double kappa = T / r;
  const double k2 = kappa * kappa;
  const double k4 = k2 * k2;

  // Weight of the kappa^(n+1) piece: the electrostatic part is exactly one
  // third of it, so the components share one series skeleton.
  const bool retarded = component != ForceComponent::electrostatic_only;
  const double e = component == ForceComponent::total_with_neutralizer ? 1.0
                   : component == ForceComponent::self_force_only ? 2.0 / 3.0
                                                                  : 1.0 / 3.0;
  const bool use_tail = retarded && kappa >= 2.0;

  const double pref = 3.0 / (T * r * r);
  // Power-over-factorial ladders T^n/(n+4)! and (T-2R)^n/(n+4)!, advanced
  // recursively so neither factorials nor plain powers are ever formed.
  double t_base = 1.0 / 24.0;
  double tail_base = 1.0 / 24.0;

  SeriesAccumulator acc(tol, 1e-3 / (r * r * r), std::min(40, n_max));
  bool converged = false;
  for (int n = 0; n < n_max; ++n) {
    const double d = trajectory.shape_derivative_at_zero_plus(n);
    double term = 0.0;
    if (d != 0.0) {
      double poly = -e * (n + 2.0) * (n + 3.0) * (n + 4.0) * kappa;
      if (retarded) {
        poly += -k4 + (n + 3.0) * (n + 4.0) * k2;
      }
      term = t_base * poly;
      if (use_tail) {
        term += tail_base * (kappa - 2.0) * (kappa - 2.0) *
                (k2 + 2.0 * (n + 2.0) * kappa + n * (n + 3.0));
      }
      term *= pref * d;
    }
    t_base *= T / (n + 5.0);
    tail_base *= (T - 2.0 * r) / (n + 5.0);
    if (acc.add(term)) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError(
        "avg_force_series: series did not settle within " +
            std::to_string(n_max) + " terms (relative estimate " +
            std::to_string(acc.truncation_estimate()) + ")",
        acc.terms(), acc.truncation_estimate());
  }
  return make_result(trajectory, body, component, acc.sum(), acc.terms(),
                     acc.truncation_estimate());
}

ForceResult force_at_time_series(const Trajectory& trajectory, double t2,
                                 const SphereBody& body,
                                 ForceComponent component, double tol,
                                 int n_max) {
  check_series_controls(tol, n_max, "force_at_time_series");
  const double r = body.radius();
  const double r3 = r * r * r;
  const double T = trajectory.duration();

  // Causality and bounded memory, kept exact: nothing before the window
  // opens, nothing after the last emitted signal has crossed the body.
  if (t2 < 0.0 || t2 >= T + 2.0 * r) {
    return make_result(trajectory, body, component, 0.0, 0, 0.0);
  }

  double phi = impulse_weight(component) / r3 * trajectory.shape_value(t2);
  if (component == ForceComponent::electrostatic_only) {
    return make_result(trajectory, body, component, phi, 0, 0.0);
  }

  const double kappa = t2 / r;
  const double xi = kappa - T / r;  // in (-T/R, 2): time past the window end
  const double k2 = kappa * kappa;
  const bool in_window = xi < 0.0;
  const bool use_tail = kappa >= 2.0;

  // Ladders t2^n/(n+3)!, T^n/(n+3)! and (t2-2R)^n/(n+3)!.
  double u_base = 1.0 / 6.0;
  double w_base = 1.0 / 6.0;
  double tail_base = 1.0 / 6.0;

  SeriesAccumulator acc(tol, 1e-3 / r3, std::min(40, n_max));
  bool converged = false;
  for (int n = 0; n < n_max; ++n) {
    const double d = trajectory.shape_derivative_at_zero_plus(n);
    double term = 0.0;
    if (d != 0.0) {
      const double b_poly = -k2 + (n + 2.0) * (n + 3.0);
      if (in_window) {
        term += u_base * kappa * b_poly;
      } else {
        term += w_base * (T / r) *
                (b_poly - (n + 1.0) * xi * kappa -
                 0.5 * (n + 1.0) * (n + 2.0) * xi * xi);
      }
      if (use_tail) {
        term += tail_base * (kappa - 2.0) *
                (k2 + 2.0 * (n + 1.0) * kappa + n * (n + 1.0) - 2.0);
      }
      term *= 3.0 / r3 * d;
    }
    u_base *= t2 / (n + 4.0);
    w_base *= T / (n + 4.0);
    tail_base *= (t2 - 2.0 * r) / (n + 4.0);
    if (acc.add(term)) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError(
        "force_at_time_series: series did not settle within " +
            std::to_string(n_max) + " terms (relative estimate " +
            std::to_string(acc.truncation_estimate()) + ")",
        acc.terms(), acc.truncation_estimate());
  }
  return make_result(trajectory, body, component, phi + acc.sum(), acc.terms(),
                     acc.truncation_estimate());
}

ForceResult force_current_derivatives(const Trajectory& trajectory, double t2,
                                      const SphereBody& body,
                                      ForceComponent component, double tol,
                                      int n_max) {
  check_series_controls(tol, n_max, "force_current_derivatives");
  const double T = trajectory.duration();
  if (!(t2 > 0.0) || !(t2 < T)) {
    throw DomainError(
        "force_current_derivatives: the current-derivatives expansion is only "
        "valid strictly inside the window, got t2 = " +
        std::to_string(t2));
  }
  const double r = body.radius();
  const double r3 = r * r * r;

  double phi = impulse_weight(component) / r3 * trajectory.shape_value(t2);
  if (component == ForceComponent::electrostatic_only) {
    return make_result(trajectory, body, component, phi, 0, 0.0);
  }

  const double kappa = t2 / r;
  const double k2 = kappa * kappa;
  const bool early = kappa < 2.0;  // window-opening transient still felt

  // Ladders t2^n/(n+1)! (transient) and (2R)^n/(n+1)! (settled regime).
  double p_base = 1.0;
  double q_base = 1.0;

  SeriesAccumulator acc(tol, 1e-3 / r3, std::min(40, n_max));
  bool converged = false;
  double sign = 1.0;  // (-1)^n
  for (int n = 0; n < n_max; ++n) {
    const double d = trajectory.shape_derivative_at(t2, n);
    double term = 0.0;
    if (d != 0.0) {
      double g;
      if (early) {
        g = p_base * kappa * ((n + 1.0) * k2 - 2.0 * n - 6.0);
      } else {
        g = q_base * 4.0 * (n - 1.0);
      }
      term = -1.5 / r3 * sign * d / (n + 3.0) * g;
    }
    p_base *= t2 / (n + 2.0);
    q_base *= 2.0 * r / (n + 2.0);
    sign = -sign;
    if (acc.add(term)) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError(
        "force_current_derivatives: series did not settle within " +
            std::to_string(n_max) + " terms (relative estimate " +
            std::to_string(acc.truncation_estimate()) + ")",
        acc.terms(), acc.truncation_estimate());
  }
  return make_result(trajectory, body, component, phi + acc.sum(), acc.terms(),
                     acc.truncation_estimate());
}

}  // namespace selfforce
