#include "selfforce/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>
#include <vector>

#include "selfforce/accumulation.hpp"
#include "selfforce/errors.hpp"
#include "selfforce/quadrature.hpp"

namespace selfforce {

namespace {

constexpr std::uint64_t kChunkSize = 1u << 18;  // pairs per logical chunk

// splitmix64: cheap, well-mixed stream of per-chunk seeds derived from the
// user seed, so chunk c always gets the same generator no matter which
// thread runs it.
std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk,
                         std::uint64_t salt) {
  std::uint64_t z = seed + salt + (chunk + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& gen) {
  // 53 random bits into [0, 1); implementation-independent, unlike
  // std::uniform_real_distribution.
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

struct Vec3 {
  double x, y, z;
};

Vec3 isotropic_direction(std::mt19937_64& gen) {
  const double c = 2.0 * uniform01(gen) - 1.0;
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  const double phi = 2.0 * std::numbers::pi * uniform01(gen);
  return {s * std::cos(phi), s * std::sin(phi), c};
}

Vec3 uniform_ball_point(std::mt19937_64& gen, double radius) {
  const double r = radius * std::cbrt(uniform01(gen));
  const Vec3 d = isotropic_direction(gen);
  return {r * d.x, r * d.y, r * d.z};
}

double pair_distance(std::mt19937_64& gen, double radius) {
  const Vec3 a = uniform_ball_point(gen, radius);
  const Vec3 b = uniform_ball_point(gen, radius);
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Runs work(chunk) for every chunk index, possibly on several threads.
// Callers keep per-chunk result slots and reduce them in index order
// afterwards, which is what makes the final result independent of the
// thread count.
void run_chunks(std::uint64_t n_chunks, int parallelism,
                const std::function<void(std::uint64_t)>& work) {
  if (parallelism <= 1 || n_chunks <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
      work(c);
    }
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto runner = [&]() {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= n_chunks) {
        return;
      }
      try {
        work(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        return;
      }
    }
  };
  const int n_threads =
      static_cast<int>(std::min<std::uint64_t>(parallelism, n_chunks));
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int i = 0; i < n_threads; ++i) {
    pool.emplace_back(runner);
  }
  for (auto& t : pool) {
    t.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

std::uint64_t chunk_count(std::uint64_t samples) {
  return (samples + kChunkSize - 1) / kChunkSize;
}

std::uint64_t chunk_samples(std::uint64_t samples, std::uint64_t chunk) {
  const std::uint64_t begin = chunk * kChunkSize;
  return std::min(kChunkSize, samples - begin);
}

std::string format17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void McConfig::validate() const {
  if (sample_count < 10'000) {
    throw DomainError("McConfig: sample_count must be >= 10^4, got " +
                      std::to_string(sample_count));
  }
  if (bin_count != 0 && bin_count < 50) {
    throw DomainError("McConfig: bin_count must be 0 (automatic) or >= 50, got " +
                      std::to_string(bin_count));
  }
  if (parallel_chunks < 0) {
    throw DomainError("McConfig: parallel_chunks must be >= 0");
  }
}

int McConfig::effective_bin_count() const {
  if (bin_count > 0) {
    return bin_count;
  }
  // Grows slowly with the sample count so per-bin statistics keep improving.
  const double suggested =
      2.4 * std::pow(static_cast<double>(sample_count), 0.2);
  return std::max(50, static_cast<int>(std::llround(suggested)));
}

int McConfig::effective_parallelism() const {
  if (parallel_chunks > 0) {
    return parallel_chunks;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double PairDistanceHistogram::density_integral() const {
  NeumaierSum s;
  for (double d : density) {
    s += d * bin_width;
  }
  return s.value();
}

void OracleReport::add_point(double where, double closed, double estimate,
                             double std_error) {
  grid.push_back(where);
  closed_form.push_back(closed);
  oracle.push_back(estimate);
  const double abs = std::abs(closed - estimate);
  abs_err.push_back(abs);
  rel_err.push_back(abs / std::max(std::abs(closed),
                                   std::numeric_limits<double>::min()));
  standard_error.push_back(std_error);
  const bool ok =
      abs <= std::max({atol, rtol * std::abs(closed), 5.0 * std_error});
  point_pass.push_back(ok ? 1 : 0);
  if (!ok) {
    pass = false;
  }
}

double OracleReport::max_abs_err() const {
  double m = 0.0;
  for (double e : abs_err) {
    m = std::max(m, e);
  }
  return m;
}

double OracleReport::max_rel_err() const {
  double m = 0.0;
  for (double e : rel_err) {
    m = std::max(m, e);
  }
  return m;
}

void OracleReport::write_text(std::ostream& out) const {
  out << (pass ? "[PASS] " : "[FAIL] ") << quantity << ": points=" << size()
      << " max_abs_err=" << format17(max_abs_err())
      << " max_rel_err=" << format17(max_rel_err()) << " atol=" << atol
      << " rtol=" << rtol;
  if (sample_count > 0) {
    out << " samples=" << sample_count << " seed=" << seed;
  }
  if (!note.empty()) {
    out << "\n       " << note;
  }
  out << "\n";
}

void OracleReport::write_csv_rows(std::ostream& out) const {
  for (std::size_t i = 0; i < size(); ++i) {
    out << quantity << ',' << i << ',' << format17(grid[i]) << ','
        << format17(closed_form[i]) << ',' << format17(oracle[i]) << ','
        << format17(abs_err[i]) << ',' << format17(rel_err[i]) << ','
        << format17(standard_error[i]) << ','
        << (point_pass[i] ? "pass" : "fail") << '\n';
  }
}

PairDistanceHistogram mc_pair_pdf(const SphereBody& body, const McConfig& cfg) {
  cfg.validate();
  const int bins = cfg.effective_bin_count();
  const double r_max = 2.0 * body.radius();
  const double width = r_max / bins;
  const std::uint64_t samples = cfg.sample_count;
  const std::uint64_t chunks = chunk_count(samples);

  std::vector<std::vector<std::uint64_t>> partial(chunks);
  run_chunks(chunks, cfg.effective_parallelism(), [&](std::uint64_t c) {
    std::vector<std::uint64_t> counts(bins, 0);
    std::mt19937_64 gen(chunk_seed(cfg.seed, c, 0));
    const std::uint64_t n = chunk_samples(samples, c);
    for (std::uint64_t i = 0; i < n; ++i) {
      const double d = pair_distance(gen, body.radius());
      int idx = static_cast<int>(d / width);
      idx = std::clamp(idx, 0, bins - 1);
      ++counts[idx];
    }
    partial[c] = std::move(counts);
  });

  PairDistanceHistogram hist;
  hist.r_max = r_max;
  hist.bin_width = width;
  hist.sample_count = samples;
  hist.counts.assign(bins, 0);
  for (const auto& counts : partial) {
    for (int b = 0; b < bins; ++b) {
      hist.counts[b] += counts[b];
    }
  }
  hist.density.resize(bins);
  const double norm = 1.0 / (static_cast<double>(samples) * width);
  for (int b = 0; b < bins; ++b) {
    hist.density[b] = static_cast<double>(hist.counts[b]) * norm;
  }
  return hist;
}

OracleReport oracle_I(const SphereBody& body, const McConfig& cfg,
                      double perturb_closed_form) {
  const PairDistanceHistogram hist = mc_pair_pdf(body, cfg);
  const int bins = static_cast<int>(hist.counts.size());
  const double width = hist.bin_width;
  const double n = static_cast<double>(hist.sample_count);
  const double r = body.radius();

  OracleReport report;
  report.quantity = "kernel_pair_distance_mc";
  report.note =
      "I(s) reconstructed from curvature-corrected density/s with a "
      "five-point derivative stencil; standard error from binomial bin "
      "variances";
  report.atol = 3e-9 / (r * r * r);
  report.rtol = 0.0;
  report.seed = cfg.seed;
  report.sample_count = cfg.sample_count;

  auto var_d = [&](int b) {
    const double p = hist.density[b];
    return p * std::max(0.0, 1.0 - p * width) / (n * width);
  };
  // A bin average over-states the density at the bin center by
  // p''(c) w^2 / 24 (midpoint-rule error).  Dividing by the center and
  // differencing across bins turns that into a bias near s = 0 that is
  // independent of the bin width, so it would eventually dominate the
  // shrinking statistical error as samples grow.  Remove the curvature term
  // with the measured second difference before dividing.
  auto h = [&](int b) {
    const double corrected =
        hist.density[b] - (hist.density[b + 1] - 2.0 * hist.density[b] +
                           hist.density[b - 1]) /
                              24.0;
    return corrected / hist.bin_center(b);
  };
  auto var_h = [&](int b) {
    constexpr double w0 = 13.0 / 12.0;  // weight of the bin's own density
    constexpr double w1 = 1.0 / 24.0;   // weight of each neighbor
    const double var = w0 * w0 * var_d(b) +
                       w1 * w1 * (var_d(b + 1) + var_d(b - 1));
    const double c = hist.bin_center(b);
    return var / (c * c);
  };

  for (int i = 3; i + 3 < bins; ++i) {
    const double s = hist.bin_center(i);
    // Five-point first derivative: exact through quartics, so the density
    // profile (a quintic whose s-division is a quartic) contributes no
    // systematic stencil error beyond the histogram's own O(w^4) residue.
    const double estimate =
        (-h(i + 2) + 8.0 * h(i + 1) - 8.0 * h(i - 1) + h(i - 2)) /
        (12.0 * width);
    const double se = std::sqrt(var_h(i + 2) +
                                64.0 * (var_h(i + 1) + var_h(i - 1)) +
                                var_h(i - 2)) /
                      (12.0 * width);
    const double closed =
        eval_I(s, body).value * (1.0 + perturb_closed_form);
    report.add_point(s, closed, estimate, se);
  }
  return report;
}

namespace {

// Normalized instantaneous force phi(t2) = F / (rho^2 V^2 amplitude) by
// direct convolution of the impulse+smooth kernel with the shape history.
double conv_phi(const Trajectory& trajectory, const SphereBody& body,
                double t2, ForceComponent component) {
  const double T = trajectory.duration();
  const double r = body.radius();
  if (t2 < 0.0 || t2 >= T + 2.0 * r) {
    return 0.0;
  }
  const ImpulseSmoothKernel kernel = kernel_g(body, component);
  double phi = kernel.impulse_coefficient * trajectory.shape_value(t2);
  if (!kernel.has_smooth) {
    return phi;
  }
  const double lo = std::max(0.0, t2 - 2.0 * r);
  const double hi = std::min(T, t2);
  if (hi > lo) {
    auto integrand = [&](double u) {
      return kernel.smooth(t2 - u) * trajectory.shape_value(u);
    };
    // Error target keyed to the integrand magnitude (probe on a coarse grid).
    double magnitude = 0.0;
    for (int k = 0; k <= 16; ++k) {
      const double u = lo + (hi - lo) * k / 16.0;
      magnitude = std::max(magnitude, std::abs(integrand(u)));
    }
    const double abs_tol =
        1e-12 * std::max(magnitude * (hi - lo), 1e-3 / (r * r * r));
    phi += integrate_adaptive(integrand, lo, hi, abs_tol, "conv_force");
  }
  return phi;
}

}  // namespace

double conv_force(const Trajectory& trajectory, const SphereBody& body,
                  double t2, ForceComponent component) {
  const double rho = body.charge_density();
  const double v = body.volume();
  return rho * rho * v * v * trajectory.amplitude() *
         conv_phi(trajectory, body, t2, component);
}

double quad_avg_force(const Trajectory& trajectory, const SphereBody& body,
                      ForceComponent component) {
  const double T = trajectory.duration();
  const double r = body.radius();
  auto integrand = [&](double t2) {
    return conv_phi(trajectory, body, t2, component);
  };
  // The integrand kinks where the smooth kernel's support edge crosses the
  // window opening.
  const double breaks[] = {2.0 * r};
  double magnitude = 0.0;
  for (int k = 1; k < 16; ++k) {
    magnitude = std::max(magnitude, std::abs(integrand(T * k / 16.0)));
  }
  const double abs_tol =
      1e-12 * std::max(magnitude * T, 1e-3 * T / (r * r * r));
  const double integral =
      integrate_adaptive(integrand, 0.0, T, breaks, abs_tol, "quad_avg_force");
  const double rho = body.charge_density();
  const double v = body.volume();
  return rho * rho * v * v * trajectory.amplitude() * integral / T;
}

OracleReport mc_pair_moment(int n, const SphereBody& body, const McConfig& cfg) {
  if (n < 0) {
    throw DomainError("mc_pair_moment: order must be >= 0, got " +
                      std::to_string(n));
  }
  cfg.validate();
  const double r = body.radius();
  const double v = body.volume();
  const double v2 = v * v;
  const double closed = pair_moment(n, body);

  OracleReport report;
  report.quantity = "pair_moment_mc_n" + std::to_string(n);
  report.atol = 0.0;
  report.rtol = 1e-12;
  report.seed = cfg.seed;
  report.sample_count = cfg.sample_count;

  struct Sums {
    NeumaierSum sum;
    NeumaierSum sum_sq;
  };

  auto reduce = [](const std::vector<Sums>& partial) {
    NeumaierSum total, total_sq;
    for (const auto& p : partial) {
      total += p.sum.value();
      total_sq += p.sum_sq.value();
    }
    return std::pair<double, double>{total.value(), total_sq.value()};
  };

  auto mean_and_variance = [](double sum, double sum_sq, double count) {
    const double mean = sum / count;
    const double variance =
        std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
    return std::pair<double, double>{mean, variance};
  };

  if (n >= 1) {
    // Plain sample mean of r^(n-1) over independent pairs.
    const std::uint64_t samples = cfg.sample_count;
    const std::uint64_t chunks = chunk_count(samples);
    std::vector<Sums> partial(chunks);
    run_chunks(chunks, cfg.effective_parallelism(), [&](std::uint64_t c) {
      Sums s;
      std::mt19937_64 gen(chunk_seed(cfg.seed, c, 0));
      const std::uint64_t count = chunk_samples(samples, c);
      for (std::uint64_t i = 0; i < count; ++i) {
        const double d = pair_distance(gen, r);
        const double x = std::pow(d, n - 1);
        s.sum += x;
        s.sum_sq += x * x;
      }
      partial[c] = s;
    });
    const auto [sum, sum_sq] = reduce(partial);
    const auto [mean, variance] =
        mean_and_variance(sum, sum_sq, static_cast<double>(samples));
    report.note = "plain sample mean of r^(n-1) over uniform pairs";
    report.add_point(static_cast<double>(n), closed, v2 * mean,
                     v2 * std::sqrt(variance / static_cast<double>(samples)));
    return report;
  }

  // n = 0: E[1/r] has an integrable singularity at coincident pairs, where
  // the plain estimator's variance estimate is useless.  Stratify at
  // r0 = R/2: below it, draw the relative displacement from the importance
  // density g(r) = 2r/r0^2 (the resulting estimator is a bounded constant
  // times an inside-the-sphere indicator); above it, plain sampling with
  // the bounded integrand 1/r restricted to r >= r0.
  const double r0 = 0.5 * r;
  const std::uint64_t near_samples = cfg.sample_count / 2;
  const std::uint64_t far_samples = cfg.sample_count - near_samples;

  const double near_weight =
      2.0 * std::numbers::pi * r0 * r0 / v;  // bounded estimator value

  const std::uint64_t near_chunks = chunk_count(near_samples);
  std::vector<Sums> near_partial(near_chunks);
  run_chunks(near_chunks, cfg.effective_parallelism(), [&](std::uint64_t c) {
    Sums s;
    std::mt19937_64 gen(chunk_seed(cfg.seed, c, 0xa11ce5u));
    const std::uint64_t count = chunk_samples(near_samples, c);
    for (std::uint64_t i = 0; i < count; ++i) {
      const Vec3 p1 = uniform_ball_point(gen, r);
      const double sep = r0 * std::sqrt(uniform01(gen));
      const Vec3 dir = isotropic_direction(gen);
      const double x2 = p1.x + sep * dir.x;
      const double y2 = p1.y + sep * dir.y;
      const double z2 = p1.z + sep * dir.z;
      const bool inside = x2 * x2 + y2 * y2 + z2 * z2 <= r * r;
      const double x = inside ? near_weight : 0.0;
      s.sum += x;
      s.sum_sq += x * x;
    }
    near_partial[c] = s;
  });

  const std::uint64_t far_chunks = chunk_count(far_samples);
  std::vector<Sums> far_partial(far_chunks);
  run_chunks(far_chunks, cfg.effective_parallelism(), [&](std::uint64_t c) {
    Sums s;
    std::mt19937_64 gen(chunk_seed(cfg.seed, c, 0xb0b51ed5u));
    const std::uint64_t count = chunk_samples(far_samples, c);
    for (std::uint64_t i = 0; i < count; ++i) {
      const double d = pair_distance(gen, r);
      const double x = d >= r0 ? 1.0 / d : 0.0;
      s.sum += x;
      s.sum_sq += x * x;
    }
    far_partial[c] = s;
  });

  const auto [near_sum, near_sum_sq] = reduce(near_partial);
  const auto [far_sum, far_sum_sq] = reduce(far_partial);
  const auto [near_mean, near_var] = mean_and_variance(
      near_sum, near_sum_sq, static_cast<double>(near_samples));
  const auto [far_mean, far_var] =
      mean_and_variance(far_sum, far_sum_sq, static_cast<double>(far_samples));

  const double estimate = v2 * (near_mean + far_mean);
  const double se =
      v2 * std::sqrt(near_var / static_cast<double>(near_samples) +
                     far_var / static_cast<double>(far_samples));
  report.note =
      "stratified at r0 = R/2: importance-sampled near-coincidence stratum "
      "plus plain far stratum";
  report.add_point(0.0, closed, estimate, se);
  return report;
}

}  // namespace selfforce
