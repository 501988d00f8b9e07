#include "selfforce/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "selfforce/errors.hpp"

namespace selfforce {

namespace {

void check_window(double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw DomainError("Trajectory: window length must be positive and finite, got " +
                      std::to_string(duration));
  }
}

void check_amplitude(double amplitude) {
  if (!std::isfinite(amplitude)) {
    throw DomainError("Trajectory: amplitude must be finite");
  }
}

// n-th derivative of cos at phase omega*t, scaled by omega^n, with the
// quarter-period cycle handled by index instead of by shifting the phase
// (keeps the exact zeros of the one-sided limits exact).
double cos_derivative(double omega, double t, int n) {
  const double p = std::pow(omega, n);
  switch (n & 3) {
    case 0:
      return p * std::cos(omega * t);
    case 1:
      return -p * std::sin(omega * t);
    case 2:
      return -p * std::cos(omega * t);
    default:
      return p * std::sin(omega * t);
  }
}

double cos_derivative_at_zero(double omega, int n) {
  const double p = std::pow(omega, n);
  switch (n & 3) {
    case 0:
      return p;
    case 1:
    case 3:
      return 0.0;
    default:
      return -p;
  }
}

}  // namespace

Trajectory::Trajectory(TrajectoryKind kind, double duration, double amplitude)
    : kind_(kind),
      duration_(duration),
      amplitude_(amplitude),
      order_available_(std::numeric_limits<int>::max()) {
  check_window(duration);
  check_amplitude(amplitude);
}

Trajectory Trajectory::steplike(double duration, double amplitude) {
  return Trajectory(TrajectoryKind::steplike, duration, amplitude);
}

Trajectory Trajectory::raised_cosine(double duration, double amplitude) {
  return Trajectory(TrajectoryKind::raised_cosine, duration, amplitude);
}

Trajectory Trajectory::polynomial(double duration,
                                  std::vector<double> coefficients,
                                  double amplitude) {
  if (coefficients.empty()) {
    throw DomainError("Trajectory: polynomial needs at least one coefficient");
  }
  for (double c : coefficients) {
    if (!std::isfinite(c)) {
      throw DomainError("Trajectory: polynomial coefficients must be finite");
    }
  }
  Trajectory t(TrajectoryKind::polynomial, duration, amplitude);
  t.coefficients_ = std::move(coefficients);
  return t;
}

Trajectory Trajectory::custom(double duration, double amplitude, ShapeFn shape,
                              int derivative_order_available) {
  if (!shape) {
    throw DomainError("Trajectory: custom profile callable is empty");
  }
  if (derivative_order_available < 0) {
    throw DomainError("Trajectory: derivative order available must be >= 0");
  }
  Trajectory t(TrajectoryKind::custom, duration, amplitude);
  t.shape_ = std::move(shape);
  t.order_available_ = derivative_order_available;
  return t;
}

Trajectory Trajectory::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("trajectory file: cannot open '" + path + "'");
  }

  auto next_content_line = [&in](std::string& line) -> bool {
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') {
        continue;
      }
      return true;
    }
    return false;
  };

  std::string header;
  if (!next_content_line(header)) {
    throw ParseError("trajectory file: missing header line 'T=<value> amplitude=<value>'");
  }

  auto parse_number = [&path](const std::string& token,
                              const char* where) -> double {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token.empty()) {
      throw ParseError("trajectory file '" + path + "': " + where + " '" +
                       token +
                       "' is not a number (profiles are polynomial "
                       "coefficients; sampled data has no analytic "
                       "derivatives to expand in)");
    }
    return v;
  };

  double duration = 0.0;
  double amplitude = 0.0;
  bool have_t = false;
  bool have_amp = false;
  std::istringstream hs(header);
  std::string field;
  while (hs >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) {
      throw ParseError("trajectory file '" + path +
                       "': header field '" + field +
                       "' is not of the form key=value");
    }
    const std::string key = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    if (key == "T") {
      duration = parse_number(val, "window length");
      have_t = true;
    } else if (key == "amplitude") {
      amplitude = parse_number(val, "amplitude");
      have_amp = true;
    } else {
      throw ParseError("trajectory file '" + path + "': unknown header key '" +
                       key + "' (expected T and amplitude)");
    }
  }
  if (!have_t || !have_amp) {
    throw ParseError("trajectory file '" + path +
                     "': header must provide both T=<value> and amplitude=<value>");
  }

  std::vector<double> coefficients;
  std::string line;
  while (next_content_line(line)) {
    std::istringstream ls(line);
    std::string token;
    while (ls >> token) {
      coefficients.push_back(parse_number(token, "shape coefficient"));
    }
  }
  if (coefficients.empty()) {
    throw ParseError("trajectory file '" + path +
                     "': no shape coefficients after the header");
  }
  try {
    return polynomial(duration, std::move(coefficients), amplitude);
  } catch (const DomainError& e) {
    throw ParseError("trajectory file '" + path + "': " + e.what());
  }
}

double Trajectory::shape_value(double t) const {
  if (t < 0.0 || t > duration_) {
    return 0.0;
  }
  switch (kind_) {
    case TrajectoryKind::steplike:
      return 1.0;
    case TrajectoryKind::raised_cosine: {
      // Same function as 1 - cos(2 pi t / T), but evaluated without the
      // near-one cancellation: close to the window edges 1 - cos loses up
      // to half the significand, which turns into large *relative* noise
      // that adaptive quadratures downstream would chase.  The profile is
      // symmetric, so use the sine argument nearest zero; that also keeps
      // the edge values exactly zero.
      const double u = std::min(t, duration_ - t);
      const double s = std::sin(std::numbers::pi * u / duration_);
      return 2.0 * s * s;
    }
    case TrajectoryKind::polynomial: {
      // Horner evaluation of the power-basis profile.
      double acc = 0.0;
      for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
        acc = acc * t + *it;
      }
      return acc;
    }
    case TrajectoryKind::custom:
      return shape_(t, 0);
  }
  return 0.0;
}

double Trajectory::value(double t) const { return amplitude_ * shape_value(t); }

double Trajectory::shape_derivative_at(double t, int n) const {
  if (!(t > 0.0) || !(t < duration_)) {
    throw DomainError(
        "Trajectory: derivatives are defined strictly inside the window, got t = " +
        std::to_string(t));
  }
  if (n < 0) {
    throw DomainError("Trajectory: derivative order must be >= 0");
  }
  switch (kind_) {
    case TrajectoryKind::steplike:
      return n == 0 ? 1.0 : 0.0;
    case TrajectoryKind::raised_cosine: {
      if (n == 0) {
        return shape_value(t);
      }
      const double omega = 2.0 * std::numbers::pi / duration_;
      return -cos_derivative(omega, t, n);
    }
    case TrajectoryKind::polynomial: {
      double acc = 0.0;
      for (std::size_t k = coefficients_.size(); k-- > static_cast<std::size_t>(n);) {
        // falling factorial k (k-1) ... (k-n+1)
        double fall = 1.0;
        for (int j = 0; j < n; ++j) {
          fall *= static_cast<double>(k - j);
        }
        acc = acc * t + coefficients_[k] * fall;
      }
      return acc;
    }
    case TrajectoryKind::custom:
      if (n > order_available_) {
        throw UnsupportedOrderError(
            "Trajectory: custom profile provides derivatives up to order " +
            std::to_string(order_available_) + ", order " + std::to_string(n) +
            " requested");
      }
      return shape_(t, n);
  }
  return 0.0;
}

double Trajectory::shape_derivative_at_zero_plus(int n) const {
  if (n < 0) {
    throw DomainError("Trajectory: derivative order must be >= 0");
  }
  switch (kind_) {
    case TrajectoryKind::steplike:
      // One-sided derivatives of the smooth extension (constant 1).
      return n == 0 ? 1.0 : 0.0;
    case TrajectoryKind::raised_cosine: {
      if (n == 0) {
        return 0.0;
      }
      const double omega = 2.0 * std::numbers::pi / duration_;
      return -cos_derivative_at_zero(omega, n);
    }
    case TrajectoryKind::polynomial: {
      if (static_cast<std::size_t>(n) >= coefficients_.size()) {
        return 0.0;
      }
      double factorial = 1.0;
      for (int j = 2; j <= n; ++j) {
        factorial *= static_cast<double>(j);
      }
      return coefficients_[n] * factorial;
    }
    case TrajectoryKind::custom:
      if (n > order_available_) {
        throw UnsupportedOrderError(
            "Trajectory: custom profile provides derivatives up to order " +
            std::to_string(order_available_) + ", order " + std::to_string(n) +
            " requested");
      }
      return shape_(0.0, n);
  }
  return 0.0;
}

double Trajectory::derivative_at(double t, int n) const {
  return amplitude_ * shape_derivative_at(t, n);
}

double Trajectory::derivative_at_zero_plus(int n) const {
  return amplitude_ * shape_derivative_at_zero_plus(n);
}

namespace {

// Maximizes |f| over [lo, hi] by golden-section search; assumes the bracket
// came from a dense scan so |f| is unimodal inside it.
double refine_max_abs(const std::function<double(double)>& f, double lo,
                      double hi) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = std::abs(f(x1));
  double f2 = std::abs(f(x2));
  for (int i = 0; i < 80; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = std::abs(f(x2));
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = std::abs(f(x1));
    }
  }
  return std::max(f1, f2);
}

double scan_max_abs(const std::function<double(double)>& f, double duration) {
  constexpr int kSamples = 16384;
  const double h = duration / kSamples;
  double best = 0.0;
  double best_t = 0.5 * h;
  for (int i = 0; i < kSamples; ++i) {
    const double t = (i + 0.5) * h;
    const double v = std::abs(f(t));
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  const double lo = std::max(best_t - h, duration * 1e-12);
  const double hi = std::min(best_t + h, duration * (1.0 - 1e-12));
  return std::max(best, refine_max_abs(f, lo, hi));
}

}  // namespace

BrConditionReport validate_br(const Trajectory& trajectory,
                              const SphereBody& body, double threshold) {
  if (!(threshold > 0.0)) {
    throw DomainError("validate_br: threshold must be positive");
  }
  BrConditionReport report;
  report.threshold = threshold;

  const double amp = std::abs(trajectory.amplitude());
  if (amp == 0.0) {
    // No motion at all: the regime holds trivially.
    report.satisfied = true;
    return report;
  }

  const double duration = trajectory.duration();

  // A profile that is nonzero at a window edge jumps there, and a jump has
  // no finite speed.
  const double edge_open = trajectory.shape_derivative_at_zero_plus(0);
  const double edge_close = trajectory.shape_value(duration);
  const bool edge_jump = edge_open != 0.0 || edge_close != 0.0;

  const double max_shape = scan_max_abs(
      [&trajectory](double t) { return trajectory.shape_value(t); }, duration);
  report.max_abs_displacement_over_r = amp * max_shape / body.radius();

  if (edge_jump) {
    report.max_abs_speed_over_c = std::numeric_limits<double>::infinity();
  } else {
    std::function<double(double)> speed;
    if (trajectory.kind() == TrajectoryKind::custom &&
        trajectory.derivative_order_available() < 1) {
      // Value-only custom profile: central finite difference.
      const double h = duration * 1e-6;
      speed = [&trajectory, h](double t) {
        return (trajectory.shape_value(t + h) - trajectory.shape_value(t - h)) /
               (2.0 * h);
      };
    } else {
      speed = [&trajectory](double t) {
        return trajectory.shape_derivative_at(t, 1);
      };
    }
    report.max_abs_speed_over_c = amp * scan_max_abs(speed, duration);
  }

  report.satisfied = report.max_abs_displacement_over_r < threshold &&
                     report.max_abs_speed_over_c < threshold;
  return report;
}

}  // namespace selfforce
