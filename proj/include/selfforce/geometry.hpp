#pragma once

namespace selfforce {

// Uniformly charged rigid sphere.  Units: c = 1, so times and lengths share
// one unit; charge density has units charge/length^3.
class SphereBody {
 public:
  explicit SphereBody(double radius, double charge_density = 1.0);

  double radius() const { return radius_; }
  double charge_density() const { return charge_density_; }
  double volume() const;
  double total_charge() const;

 private:
  double radius_;
  double charge_density_;
};

// Value of a geometric kernel together with a support flag.  Outside the
// support the value is exactly 0 and in_support is false; step functions at
// the support boundary take the value 1 (closed boundary).
struct KernelValue {
  double value;
  bool in_support;
};

// Retarded-interaction geometry kernel I(s) of the sphere, units 1/length^3,
// supported on 0 <= s <= 2R.  It is the derivative d/ds [p(s)/s] of the
// pair-distance density p(s) divided by the separation, which makes it the
// weight with which a disturbance emitted a light-travel distance s ago acts
// back on the body.  Closed form (xi = s/R):
//
//   I(s) = (3 / 4R^3) (2 - xi) (2 - 2 xi - xi^2)
//
// Its integral over the full support vanishes: local interactions merely
// redistribute momentum until the retarded boundary is felt.
KernelValue eval_I(double s, const SphereBody& body);

// Shell-pair overlap kernel K(zeta2, xi): the (dimensionless) interaction
// weight between the full sphere and the spherical shell of fractional
// radius zeta2 in (0, 1), evaluated at dimensionless separation xi = s/R.
// Supported on 0 <= xi <= 1 + zeta2, with a kink at xi = |1 - zeta2|:
//
//   K = (1/zeta2) [ (zeta2 + xi) Theta(1 - zeta2 - xi)
//                 + (zeta2 - xi) Theta(1 + zeta2 - xi) ]   for xi >= 0.
//
// Shell decomposition: I(s) = (9 / 2R^3) Integral_0^1 zeta2^2 K dzeta2.
// Throws DomainError unless 0 < zeta2 < 1.
KernelValue eval_K(double zeta2, double xi);

// Moment of the pair-distance distribution: V^2 * E[r^(n-1)] over independent
// uniform point pairs in the sphere, n >= 0.  Closed form:
//
//   pair_moment(n) = 9 V^2 2^(n+2) R^(n-1) / ((n+5)(n+3)(n+2))
//
// n = 1 gives exactly V^2; n = 0 gives the Coulomb-energy moment 6V^2/(5R)
// (so (1/2) rho^2 * pair_moment(0) = 3 Q^2 / 5R, the electrostatic
// self-energy).  The rational prefactor is reduced in exact integer
// arithmetic before conversion to floating point.  Throws DomainError for
// n < 0.
double pair_moment(int n, const SphereBody& body);

}  // namespace selfforce
