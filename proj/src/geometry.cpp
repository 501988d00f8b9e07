#include "selfforce/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "selfforce/errors.hpp"

namespace selfforce {

SphereBody::SphereBody(double radius, double charge_density)
    : radius_(radius), charge_density_(charge_density) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw DomainError("SphereBody: radius must be positive and finite, got " +
                      std::to_string(radius));
  }
  if (!std::isfinite(charge_density)) {
    throw DomainError("SphereBody: charge density must be finite");
  }
}

double SphereBody::volume() const {
  return (4.0 / 3.0) * std::numbers::pi * radius_ * radius_ * radius_;
}

double SphereBody::total_charge() const { return charge_density_ * volume(); }

KernelValue eval_I(double s, const SphereBody& body) {
  if (!std::isfinite(s)) {
    throw DomainError("eval_I: separation must be finite");
  }
  const double r = body.radius();
  const double xi = s / r;
  // Support is the closed interval 0 <= xi <= 2 (step functions take the
  // value 1 at their edge).
  if (xi < 0.0 || xi > 2.0) {
    return {0.0, false};
  }
  const double r3 = r * r * r;
  const double value =
      0.75 / r3 * (2.0 - xi) * (2.0 - 2.0 * xi - xi * xi);
  return {value, true};
}

KernelValue eval_K(double zeta2, double xi) {
  if (!(zeta2 > 0.0) || !(zeta2 < 1.0)) {
    throw DomainError("eval_K: shell radius fraction must satisfy 0 < zeta2 < 1, got " +
                      std::to_string(zeta2));
  }
  if (!std::isfinite(xi)) {
    throw DomainError("eval_K: separation must be finite");
  }
  if (xi < 0.0 || xi > 1.0 + zeta2) {
    return {0.0, false};
  }
  double value = 0.0;
  // Near piece: both shell and sphere centers within reach.
  if (xi <= 1.0 - zeta2) {
    value += zeta2 + xi;
  }
  // Far piece: active over the whole support; changes sign at xi = zeta2.
  value += zeta2 - xi;
  return {value / zeta2, true};
}

namespace {

// Greatest common divisor for the exact reduction of the moment prefactor.
unsigned long long gcd_u64(unsigned long long a, unsigned long long b) {
  while (b != 0) {
    const unsigned long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

double pair_moment(int n, const SphereBody& body) {
  if (n < 0) {
    throw DomainError("pair_moment: order must be >= 0, got " +
                      std::to_string(n));
  }
  const double v = body.volume();
  const double r_power = std::pow(body.radius(), n - 1);

  // Prefactor 9 * 2^(n+2) / ((n+5)(n+3)(n+2)), reduced exactly before the
  // single rounding at the final division.  The numerator fits an unsigned
  // 128-bit integer up to n = 120; powers of two beyond that are still
  // exact in double, so the wide-arithmetic path is only needed where it
  // actually buys exactness.
  double prefactor;
  if (n <= 120) {
    unsigned __int128 num = 9;
    num <<= (n + 2);
    unsigned long long den = static_cast<unsigned long long>(n + 5) *
                             static_cast<unsigned long long>(n + 3) *
                             static_cast<unsigned long long>(n + 2);
    // The numerator is 9 * 2^(n+2): cancel the denominator's twos, then its
    // threes (at most the 9), leaving a fully reduced fraction.
    while ((den & 1ull) == 0 && (num & 1) == 0) {
      den >>= 1;
      num >>= 1;
    }
    const unsigned long long g9 = gcd_u64(9ull, den);
    num /= g9;
    den /= g9;
    prefactor = static_cast<double>(num) / static_cast<double>(den);
  } else {
    prefactor = 9.0 * std::exp2(n + 2) /
                (static_cast<double>(n + 5) * static_cast<double>(n + 3) *
                 static_cast<double>(n + 2));
  }
  return prefactor * v * v * r_power;
}

}  // namespace selfforce
