#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "selfforce/geometry.hpp"
#include "selfforce/self_force.hpp"
#include "selfforce/trajectory.hpp"

namespace selfforce {

// Monte-Carlo configuration.  Runs are reproducible: the same seed and
// configuration produce bit-identical results regardless of parallel_chunks
// (work is cut into fixed-size logical chunks, each with its own
// deterministically derived generator, and reduced in chunk order; threads
// only decide who computes which chunk).
struct McConfig {
  std::uint64_t sample_count = 10'000'000;
  std::uint64_t seed = 0x5f3759df9e3779b9ull;
  int bin_count = 0;        // 0: automatic, max(50, ~2.4 N^(1/5))
  int parallel_chunks = 0;  // 0: hardware concurrency

  void validate() const;  // sample_count >= 1e4, bin_count 0 or >= 50
  int effective_bin_count() const;
  int effective_parallelism() const;
};

// Histogram estimate of the pair-distance density p(s) for two independent
// uniform points in the sphere, supported on [0, 2R].
struct PairDistanceHistogram {
  double r_max = 0.0;      // 2R
  double bin_width = 0.0;  // r_max / bin count
  std::uint64_t sample_count = 0;
  std::vector<std::uint64_t> counts;
  std::vector<double> density;  // counts / (sample_count * bin_width)

  double bin_center(int i) const { return (i + 0.5) * bin_width; }
  double density_integral() const;  // should be 1 up to rounding
};

// Outcome of one closed-form-versus-oracle comparison over a grid of
// evaluation points.  The pass rule at each point is fixed by this type:
//
//   |closed_form - oracle| <= max(atol, rtol * |closed_form|, 5 * standard_error)
//
// (standard_error is 0 for deterministic oracles, so the rule degrades to a
// plain absolute/relative test for quadrature checks).
struct OracleReport {
  std::string quantity;
  std::string note;
  double atol = 0.0;
  double rtol = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t sample_count = 0;

  std::vector<double> grid;
  std::vector<double> closed_form;
  std::vector<double> oracle;
  std::vector<double> abs_err;
  std::vector<double> rel_err;
  std::vector<double> standard_error;
  std::vector<char> point_pass;
  bool pass = true;

  void add_point(double where, double closed, double estimate,
                 double std_error);
  std::size_t size() const { return grid.size(); }
  double max_abs_err() const;
  double max_rel_err() const;

  void write_text(std::ostream& out) const;
  // Appends rows "quantity,index,grid,closed_form,oracle,abs_err,rel_err,
  // standard_error,pass" (no header; callers own the file-level header).
  void write_csv_rows(std::ostream& out) const;
};

// Monte-Carlo pair-distance density (shared sampling engine for the
// kernel-shape and moment oracles below).
PairDistanceHistogram mc_pair_pdf(const SphereBody& body, const McConfig& cfg);

// Reconstructs I(s) from the sampled pair-distance density via
// I = d/ds (p/s) with centered differences on the histogram, and compares
// with eval_I at every interior bin center.  perturb_closed_form multiplies
// the closed-form side by (1 + perturb) -- the hook used by negative-control
// tests; 0 for honest comparisons.
OracleReport oracle_I(const SphereBody& body, const McConfig& cfg,
                      double perturb_closed_form = 0.0);

// Window-averaged force by adaptive quadrature of the convolution-based
// instantaneous force (conv_force below) over [0, T], with a breakpoint at
// the light-crossing kink 2R.  Independent of the averaged-series weights.
double quad_avg_force(const Trajectory& trajectory, const SphereBody& body,
                      ForceComponent component = ForceComponent::total_with_neutralizer);

// Instantaneous force at t2 by direct convolution of the impulse+smooth
// kernel with the displacement history:
//
//   F(t2) = rho^2 V^2 [ c_delta D(t2) + Integral smooth(t2 - u) D(u) du ]
//
// integrated by adaptive quadrature over the overlap of the kernel support
// [t2 - 2R, t2] with the window [0, T] (where the integrand is smooth).
// Exactly 0 for t2 < 0 and t2 >= T + 2R.  Works for steplike profiles too.
double conv_force(const Trajectory& trajectory, const SphereBody& body,
                  double t2,
                  ForceComponent component = ForceComponent::total_with_neutralizer);

// Monte-Carlo estimate of pair_moment(n) = V^2 E[r^(n-1)].  For n >= 1 the
// estimator is the plain sample mean of r^(n-1).  For n = 0 the integrand
// 1/r is unbounded near coincident pairs, so the estimate is stratified at
// r0 = R/2: the near-coincidence stratum draws the separation from an
// importance density proportional to r (bounded estimator), the far stratum
// uses plain sampling masked to r >= r0.
OracleReport mc_pair_moment(int n, const SphereBody& body, const McConfig& cfg);

}  // namespace selfforce
