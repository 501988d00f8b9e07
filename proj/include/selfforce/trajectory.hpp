#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "selfforce/geometry.hpp"

namespace selfforce {

enum class TrajectoryKind {
  steplike,       // D(t) = amplitude inside the window
  raised_cosine,  // D(t) = amplitude (1 - cos(2 pi t / T))
  polynomial,     // D(t) = amplitude * sum_k c_k t^k
  custom,         // user-supplied smooth profile
};

// Rigid displacement history along a fixed axis: the body sits at the origin
// for t < 0, moves by D(t) = amplitude * shape(t) during the window
// 0 <= t <= T, and is back at rest afterwards.  Outside the window the value
// is exactly zero; the window is closed on both ends.
//
// The "shape" is the dimensionless profile; its one-sided derivatives at
// t = 0+ feed the force series, so they must exist to the order requested.
class Trajectory {
 public:
  // Rectangular window: shape = 1 on [0, T].  All shape derivatives vanish;
  // the motion is carried entirely by the window-edge jumps.
  static Trajectory steplike(double duration, double amplitude);

  // shape(t) = 1 - cos(2 pi t / T): starts and ends at rest with continuous
  // velocity, peak displacement 2 * amplitude at t = T/2.
  static Trajectory raised_cosine(double duration, double amplitude);

  // shape(t) = sum_k coefficients[k] t^k (plain power basis, one-sided
  // derivatives at 0+ are k! c_k).
  static Trajectory polynomial(double duration, std::vector<double> coefficients,
                               double amplitude = 1.0);

  // shape(t, order): order-th derivative of the smooth profile at t, where
  // order = 0 is the profile itself.  t = 0 requests the one-sided limit
  // from above.  Orders above derivative_order_available are rejected.
  using ShapeFn = std::function<double(double t, int order)>;
  static Trajectory custom(double duration, double amplitude, ShapeFn shape,
                           int derivative_order_available);

  // Parse from a text description:
  //   T=<value> amplitude=<value>
  //   c0 c1 c2 ...
  // First line: window length and amplitude; second line: polynomial shape
  // coefficients.  Lines starting with '#' are skipped.  Throws ParseError
  // on malformed input (the format is polynomial-only because the force
  // series needs analytic derivatives, not sampled data).
  static Trajectory from_file(const std::string& path);

  // Displacement D(t): exactly 0 outside [0, T].
  double value(double t) const;

  // n-th time derivative of D at 0 < t < T (n = 0 is the displacement).
  // Throws DomainError outside the open window, UnsupportedOrderError if the
  // profile cannot supply order n.
  double derivative_at(double t, int n) const;

  // One-sided n-th derivative of D at t = 0+, i.e. of the smooth profile as
  // the window opens.  Exact zeros are returned as exact zeros (raised
  // cosine: odd orders and the value itself).
  double derivative_at_zero_plus(int n) const;

  // Same two accessors for the dimensionless shape (amplitude divided out).
  // These stay meaningful at amplitude = 0, which is what makes normalized
  // forces well defined there.
  double shape_value(double t) const;
  double shape_derivative_at(double t, int n) const;
  double shape_derivative_at_zero_plus(int n) const;

  double duration() const { return duration_; }
  double amplitude() const { return amplitude_; }
  TrajectoryKind kind() const { return kind_; }
  int derivative_order_available() const { return order_available_; }

 private:
  Trajectory(TrajectoryKind kind, double duration, double amplitude);

  TrajectoryKind kind_;
  double duration_;
  double amplitude_;
  int order_available_;
  std::vector<double> coefficients_;  // polynomial only
  ShapeFn shape_;                     // custom only
};

// Smallness report for the slow/small-displacement regime the force
// expressions assume: |D| << R and |dD/dt| << c.
struct BrConditionReport {
  double max_abs_displacement_over_r = 0.0;
  double max_abs_speed_over_c = 0.0;
  bool satisfied = false;
  double threshold = 0.1;
};

// Scans the window for the displacement and speed extrema (dense sampling
// plus local refinement) and compares them against threshold.  A profile
// that jumps at a window edge (steplike, or any shape nonzero at t = 0+ or
// t = T) has unbounded speed: the speed ratio is reported as +infinity and
// the condition fails for any nonzero amplitude.  Zero amplitude trivially
// satisfies the condition with both ratios 0.
BrConditionReport validate_br(const Trajectory& trajectory,
                              const SphereBody& body, double threshold = 0.1);

}  // namespace selfforce
