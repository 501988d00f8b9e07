#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "selfforce/errors.hpp"
#include "selfforce/geometry.hpp"
#include "selfforce/trajectory.hpp"

using namespace selfforce;

namespace {

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("window validation") {
  CHECK_THROWS_AS(Trajectory::steplike(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(Trajectory::steplike(-2.0, 1.0), DomainError);
  CHECK_THROWS_AS(Trajectory::raised_cosine(std::nan(""), 1.0), DomainError);
  CHECK_THROWS_AS(Trajectory::steplike(1.0, std::nan("")), DomainError);
}

TEST_CASE("steplike profile") {
  const Trajectory traj = Trajectory::steplike(1.5, 0.01);
  CHECK(traj.kind() == TrajectoryKind::steplike);
  CHECK(traj.duration() == 1.5);
  CHECK(traj.amplitude() == 0.01);

  // Constant inside the closed window, exactly zero outside.
  CHECK(traj.value(0.0) == 0.01);
  CHECK(traj.value(0.7) == 0.01);
  CHECK(traj.value(1.5) == 0.01);
  CHECK(traj.value(-1e-300) == 0.0);
  CHECK(traj.value(1.5 + 1e-12) == 0.0);

  CHECK(traj.derivative_at(0.7, 0) == 0.01);
  CHECK(traj.derivative_at(0.7, 1) == 0.0);
  CHECK(traj.derivative_at_zero_plus(0) == 0.01);
  CHECK(traj.derivative_at_zero_plus(5) == 0.0);
  CHECK(traj.shape_derivative_at_zero_plus(0) == 1.0);

  // Derivatives only strictly inside the window.
  CHECK_THROWS_AS(traj.derivative_at(0.0, 1), DomainError);
  CHECK_THROWS_AS(traj.derivative_at(1.5, 1), DomainError);
  CHECK_THROWS_AS(traj.derivative_at(2.0, 1), DomainError);
  CHECK_THROWS_AS(traj.derivative_at(0.7, -1), DomainError);
}

TEST_CASE("raised cosine profile") {
  const double T = 1.5;
  const double amp = 0.25;
  const Trajectory traj = Trajectory::raised_cosine(T, amp);
  const double omega = 2.0 * std::numbers::pi / T;

  CHECK(traj.value(0.0) == 0.0);
  CHECK(std::abs(traj.value(T)) < 1e-25);  // zero up to rounding of pi
  CHECK(traj.value(T / 2) == doctest::Approx(2.0 * amp).epsilon(1e-15));
  CHECK(traj.value(-0.1) == 0.0);
  CHECK(traj.value(T + 0.1) == 0.0);

  // Interior derivatives against the closed forms.
  const double t = 0.3;
  CHECK(rel_err(traj.derivative_at(t, 1), amp * omega * std::sin(omega * t)) <
        1e-14);
  CHECK(rel_err(traj.derivative_at(t, 2),
                amp * omega * omega * std::cos(omega * t)) < 1e-14);
  CHECK(rel_err(traj.derivative_at(t, 5),
                amp * std::pow(omega, 5) * std::sin(omega * t)) < 1e-13);

  // First derivative against a central finite difference.
  const double h = 1e-6;
  const double fd = (traj.value(t + h) - traj.value(t - h)) / (2.0 * h);
  CHECK(rel_err(traj.derivative_at(t, 1), fd) < 1e-8);

  // One-sided derivatives at the window opening: exact zeros at even footing.
  CHECK(traj.derivative_at_zero_plus(0) == 0.0);
  CHECK(traj.derivative_at_zero_plus(1) == 0.0);
  CHECK(traj.derivative_at_zero_plus(3) == 0.0);
  CHECK(traj.derivative_at_zero_plus(7) == 0.0);
  CHECK(rel_err(traj.derivative_at_zero_plus(2), amp * omega * omega) < 1e-15);
  CHECK(rel_err(traj.derivative_at_zero_plus(4), -amp * std::pow(omega, 4)) <
        1e-15);
  CHECK(rel_err(traj.derivative_at_zero_plus(6), amp * std::pow(omega, 6)) <
        1e-15);

  // Shape-level accessors divide out the amplitude and survive amplitude 0.
  CHECK(rel_err(traj.shape_derivative_at_zero_plus(2), omega * omega) < 1e-15);
  const Trajectory frozen = Trajectory::raised_cosine(T, 0.0);
  CHECK(frozen.value(0.4) == 0.0);
  CHECK(rel_err(frozen.shape_value(0.4),
                1.0 - std::cos(omega * 0.4)) < 1e-14);
}

TEST_CASE("polynomial profile") {
  // shape(t) = t - 0.5 t^2
  const Trajectory traj = Trajectory::polynomial(2.0, {0.0, 1.0, -0.5}, 0.1);
  CHECK(traj.kind() == TrajectoryKind::polynomial);

  CHECK(rel_err(traj.value(0.5), 0.1 * (0.5 - 0.125)) < 1e-15);
  CHECK(rel_err(traj.derivative_at(0.5, 1), 0.1 * (1.0 - 0.5)) < 1e-15);
  CHECK(traj.derivative_at(0.5, 2) == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(traj.derivative_at(0.5, 3) == 0.0);
  CHECK(traj.derivative_at(0.5, 7) == 0.0);

  CHECK(traj.derivative_at_zero_plus(0) == 0.0);
  CHECK(traj.derivative_at_zero_plus(1) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(traj.derivative_at_zero_plus(2) ==
        doctest::Approx(-0.1).epsilon(1e-15));  // 2! * (-0.5) * amplitude
  CHECK(traj.derivative_at_zero_plus(9) == 0.0);

  CHECK_THROWS_AS(Trajectory::polynomial(1.0, {}), DomainError);
  CHECK_THROWS_AS(Trajectory::polynomial(1.0, {std::nan("")}), DomainError);
}

namespace {

// Smooth bump shape sin^2(pi t / T) with analytic derivatives to order 2.
double bump_shape(double t, int order, double T) {
  const double w = std::numbers::pi / T;
  switch (order) {
    case 0:
      return std::sin(w * t) * std::sin(w * t);
    case 1:
      return w * std::sin(2.0 * w * t);
    default:
      return 2.0 * w * w * std::cos(2.0 * w * t);
  }
}

}  // namespace

TEST_CASE("custom profile and derivative-order limits") {
  const double T = 2.0;
  const Trajectory traj = Trajectory::custom(
      T, 0.5, [T](double t, int order) { return bump_shape(t, order, T); }, 2);
  CHECK(traj.kind() == TrajectoryKind::custom);
  CHECK(traj.derivative_order_available() == 2);

  CHECK(rel_err(traj.value(0.5), 0.5 * bump_shape(0.5, 0, T)) < 1e-15);
  CHECK(rel_err(traj.derivative_at(0.5, 1), 0.5 * bump_shape(0.5, 1, T)) <
        1e-15);
  CHECK(rel_err(traj.derivative_at_zero_plus(2), 0.5 * bump_shape(0.0, 2, T)) <
        1e-15);

  CHECK_THROWS_AS(traj.derivative_at(0.5, 3), UnsupportedOrderError);
  CHECK_THROWS_AS(traj.derivative_at_zero_plus(3), UnsupportedOrderError);

  CHECK_THROWS_AS(Trajectory::custom(1.0, 1.0, nullptr, 2), DomainError);
  CHECK_THROWS_AS(Trajectory::custom(
                      1.0, 1.0, [](double, int) { return 0.0; }, -1),
                  DomainError);
}

TEST_CASE("smoothed steplike family approaches the rectangular window") {
  // D(t) = amplitude * tanh(t/delta + 1/sqrt(delta)): as delta shrinks the
  // profile's one-sided value at the window opening converges to the
  // rectangular window's (error 2 exp(-2/sqrt(delta))), which is the sense
  // in which the steplike closed forms are the limit of smooth profiles.
  const double amp = 0.01;
  double previous_gap = 1.0;
  for (double delta : {0.25, 0.04, 0.01}) {
    auto shape = [delta](double t, int order) {
      const double u = t / delta + 1.0 / std::sqrt(delta);
      const double th = std::tanh(u);
      return order == 0 ? th : (1.0 - th * th) / delta;
    };
    const Trajectory traj = Trajectory::custom(3.0, amp, shape, 1);
    const double gap = std::abs(traj.derivative_at_zero_plus(0) - amp);
    CHECK(gap < amp * 2.0 * std::exp(-2.0 / std::sqrt(delta)) * 1.0001);
    CHECK(gap < previous_gap);
    previous_gap = gap;
  }
}

TEST_CASE("trajectory files: round trip and errors") {
  const auto good = write_temp("traj_good.txt",
                               "# bump profile\n"
                               "T=2 amplitude=0.5\n"
                               "0 1 -0.5\n");
  const Trajectory traj = Trajectory::from_file(good.string());
  CHECK(traj.kind() == TrajectoryKind::polynomial);
  CHECK(traj.duration() == 2.0);
  CHECK(traj.amplitude() == 0.5);
  CHECK(rel_err(traj.value(0.5), 0.5 * (0.5 - 0.125)) < 1e-15);

  // Coefficients may continue over several lines.
  const auto multi = write_temp("traj_multi.txt",
                                "T=2 amplitude=0.5\n0 1\n# middle comment\n-0.5\n");
  const Trajectory traj2 = Trajectory::from_file(multi.string());
  CHECK(traj2.value(0.5) == traj.value(0.5));

  CHECK_THROWS_AS(Trajectory::from_file("/nonexistent/profile.txt"),
                  ParseError);
  const auto empty = write_temp("traj_empty.txt", "# nothing\n");
  CHECK_THROWS_AS(Trajectory::from_file(empty.string()), ParseError);
  const auto no_amp = write_temp("traj_noamp.txt", "T=2\n0 1\n");
  CHECK_THROWS_AS(Trajectory::from_file(no_amp.string()), ParseError);
  const auto bad_num = write_temp("traj_badnum.txt",
                                  "T=2 amplitude=1\n0 abc 1\n");
  CHECK_THROWS_AS(Trajectory::from_file(bad_num.string()), ParseError);
  const auto bad_key = write_temp("traj_badkey.txt",
                                  "T=2 amplitude=1 phase=0\n0 1\n");
  CHECK_THROWS_AS(Trajectory::from_file(bad_key.string()), ParseError);
  const auto no_coeff = write_temp("traj_nocoeff.txt", "T=2 amplitude=1\n");
  CHECK_THROWS_AS(Trajectory::from_file(no_coeff.string()), ParseError);
  const auto bad_window = write_temp("traj_badT.txt", "T=-1 amplitude=1\n0 1\n");
  CHECK_THROWS_AS(Trajectory::from_file(bad_window.string()), ParseError);

  // The sampled-data rejection explains itself.
  try {
    Trajectory::from_file(bad_num.string());
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("polynomial") != std::string::npos);
  }
}

TEST_CASE("smallness validation of the displacement regime") {
  SphereBody body(1.0);

  // Slow shallow raised cosine: comfortably inside the regime.
  const Trajectory gentle = Trajectory::raised_cosine(10.0, 1e-3);
  const BrConditionReport ok = validate_br(gentle, body);
  CHECK(ok.satisfied);
  CHECK(ok.threshold == 0.1);
  CHECK(rel_err(ok.max_abs_displacement_over_r, 2e-3) < 1e-6);
  const double peak_speed = 1e-3 * 2.0 * std::numbers::pi / 10.0;
  CHECK(rel_err(ok.max_abs_speed_over_c, peak_speed) < 1e-6);

  // Large amplitude violates the displacement bound.
  const BrConditionReport big =
      validate_br(Trajectory::raised_cosine(10.0, 0.2), body);
  CHECK_FALSE(big.satisfied);
  CHECK(big.max_abs_displacement_over_r > 0.1);

  // A fast window violates the speed bound even at small amplitude.
  const BrConditionReport fast =
      validate_br(Trajectory::raised_cosine(0.5, 0.02), body);
  CHECK_FALSE(fast.satisfied);
  CHECK(fast.max_abs_speed_over_c > 0.1);

  // Steplike motion jumps: unbounded speed.
  const BrConditionReport step =
      validate_br(Trajectory::steplike(10.0, 1e-6), body);
  CHECK_FALSE(step.satisfied);
  CHECK(std::isinf(step.max_abs_speed_over_c));

  // A polynomial that is nonzero at the window close jumps there too.
  const BrConditionReport ramp =
      validate_br(Trajectory::polynomial(2.0, {0.0, 1.0}, 1e-6), body);
  CHECK_FALSE(ramp.satisfied);
  CHECK(std::isinf(ramp.max_abs_speed_over_c));

  // Smooth polynomial bump t(2 - t) on [0, 2]: closes at zero, no jump.
  const Trajectory bump = Trajectory::polynomial(2.0, {0.0, 2.0, -1.0}, 1e-3);
  const BrConditionReport poly = validate_br(bump, body);
  CHECK(poly.satisfied);
  CHECK(rel_err(poly.max_abs_displacement_over_r, 1e-3) < 1e-6);
  CHECK(rel_err(poly.max_abs_speed_over_c, 2e-3) < 1e-3);

  // Zero amplitude trivially satisfies the regime.
  const BrConditionReport none =
      validate_br(Trajectory::steplike(1.0, 0.0), body);
  CHECK(none.satisfied);
  CHECK(none.max_abs_speed_over_c == 0.0);
  CHECK(none.max_abs_displacement_over_r == 0.0);

  // Custom profile without analytic derivatives: finite-difference speed.
  // Shape t^2 (T - t)^2 is exactly zero at both window edges, so no jump is
  // flagged; on [0, 2] its peak value is 1 and its peak slope is 8/(3 sqrt 3).
  const double T = 2.0;
  const Trajectory fd_bump = Trajectory::custom(
      T, 1e-3, [T](double t, int) { return t * t * (T - t) * (T - t); }, 0);
  const BrConditionReport custom = validate_br(fd_bump, body);
  CHECK(custom.satisfied);
  CHECK(rel_err(custom.max_abs_displacement_over_r, 1e-3) < 1e-6);
  CHECK(rel_err(custom.max_abs_speed_over_c, 1e-3 * 8.0 / (3.0 * std::sqrt(3.0))) <
        1e-4);

  // Threshold is honoured.
  CHECK_FALSE(validate_br(gentle, body, 1e-4).satisfied);
  CHECK_THROWS_AS(validate_br(gentle, body, 0.0), DomainError);
}
