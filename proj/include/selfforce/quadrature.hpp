#pragma once

#include <functional>
#include <span>

namespace selfforce {

// Adaptive Gauss-Kronrod integration of f over [a, b].  The integrand may
// have kinks (continuous but not differentiable) at known interior points;
// those are passed as breakpoints and the interval is split there so every
// panel sees a smooth function.  Breakpoints outside (a, b) are ignored.
//
// Throws QuadratureError if the accumulated error estimate exceeds
// abs_tol.  `what` names the integral in that error message.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, std::span<const double> breakpoints,
                          double abs_tol, const char* what);

// Convenience overload without breakpoints.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, const char* what);

// Composite fixed-order Gauss-Legendre integration (64 nodes per panel),
// split at the given interior breakpoints.  No error estimate and no
// failure path: this is for integrands that are smooth up to a small
// evaluation noise floor (e.g. truncated-series values), where an adaptive
// rule would chase the noise instead of converging.
double integrate_fixed(const std::function<double(double)>& f, double a,
                       double b, std::span<const double> breakpoints);

}  // namespace selfforce
