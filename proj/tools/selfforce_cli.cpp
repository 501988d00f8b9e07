// Command-line front end for the selfforce shared library.  Everything here
// goes through the C interface in selfforce/selfforce.h; the CLI owns
// argument parsing, CSV serialization, and exit codes.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "selfforce/selfforce.h"

namespace {

// Exit codes: 0 success, 1 verification sweep failed, 2 usage, then one per
// library failure class.
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

int exit_code_for(sf_status status) {
  switch (status) {
    case SF_OK:
      return 0;
    case SF_ERROR_INVALID_ARGUMENT:
    case SF_ERROR_DOMAIN:
      return 3;
    case SF_ERROR_UNSUPPORTED_ORDER:
      return 3;
    case SF_ERROR_NO_CONVERGENCE:
      return 4;
    case SF_ERROR_QUADRATURE:
      return 5;
    case SF_ERROR_IO:
      return 6;
    case SF_ERROR_INTERNAL:
      return 7;
  }
  return 7;
}

const char* status_name(sf_status status) {
  switch (status) {
    case SF_OK:
      return "ok";
    case SF_ERROR_INVALID_ARGUMENT:
      return "invalid_argument";
    case SF_ERROR_DOMAIN:
      return "domain_error";
    case SF_ERROR_UNSUPPORTED_ORDER:
      return "unsupported_order";
    case SF_ERROR_NO_CONVERGENCE:
      return "no_convergence";
    case SF_ERROR_QUADRATURE:
      return "quadrature_error";
    case SF_ERROR_IO:
      return "io_error";
    case SF_ERROR_INTERNAL:
      return "internal_error";
  }
  return "unknown";
}

// Full 17-significant-digit round-trip formatting; the C locale is never
// changed, so the decimal separator is always '.'.
std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void die(sf_status status, const std::string& context) {
  std::fprintf(stderr, "selfforce-cli: %s: %s (%s)\n", context.c_str(),
               sf_last_error(), status_name(status));
  std::exit(exit_code_for(status));
}

void check(sf_status status, const std::string& context) {
  if (status != SF_OK) {
    die(status, context);
  }
}

struct BodyHandle {
  sf_body* ptr = nullptr;
  ~BodyHandle() { sf_body_destroy(ptr); }
};

struct TrajectoryHandle {
  sf_trajectory* ptr = nullptr;
  TrajectoryHandle() = default;
  TrajectoryHandle(TrajectoryHandle&& other) noexcept : ptr(other.ptr) {
    other.ptr = nullptr;
  }
  TrajectoryHandle& operator=(TrajectoryHandle&& other) noexcept {
    std::swap(ptr, other.ptr);
    return *this;
  }
  TrajectoryHandle(const TrajectoryHandle&) = delete;
  ~TrajectoryHandle() { sf_trajectory_destroy(ptr); }
};

struct Options {
  double radius = 1.0;
  double rho = 1.0;
  std::string component = "total";
  std::string neutralizer = "on";
  double duration = 0.0;
  std::string traj = "cosine";
  double amplitude = 1e-3;
  double tol = 1e-10;
  int n_max = 80;
  std::string grid;
  std::string out;
  unsigned long long samples = 0;
  unsigned long long seed = 0;
  int bins = 0;
  int chunks = 0;
  double perturb_kernel = 0.0;

  CLI::Option* duration_opt = nullptr;
  CLI::Option* amplitude_opt = nullptr;
  CLI::Option* component_opt = nullptr;
  CLI::Option* neutralizer_opt = nullptr;
  CLI::Option* grid_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

void add_body_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--radius,-R", o.radius, "Sphere radius R")
      ->capture_default_str();
  cmd->add_option("--rho", o.rho, "Charge density")->capture_default_str();
}

void add_component_options(CLI::App* cmd, Options& o) {
  o.component_opt =
      cmd->add_option("--component", o.component,
                      "Force part: total, self, or electrostatic")
          ->check(CLI::IsMember({"total", "self", "electrostatic"}))
          ->capture_default_str();
  o.neutralizer_opt =
      cmd->add_option("--neutralizer", o.neutralizer,
                      "on: displaced sphere plus fixed neutralizing body; "
                      "off: bare sphere (equivalent to --component self)")
          ->check(CLI::IsMember({"on", "off"}))
          ->capture_default_str();
}

void add_series_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--tol", o.tol, "Series stop tolerance (relative)")
      ->capture_default_str();
  cmd->add_option("--n-max", o.n_max, "Series term budget")
      ->capture_default_str();
}

void add_trajectory_options(CLI::App* cmd, Options& o) {
  o.duration_opt =
      cmd->add_option("--T", o.duration, "Displacement window length");
  o.amplitude_opt =
      cmd->add_option("--amplitude", o.amplitude, "Displacement amplitude D_x")
          ->capture_default_str();
  cmd->add_option("--traj", o.traj,
                  "Trajectory: step | cosine | poly:c0,c1,... | file:PATH")
      ->capture_default_str();
}

void add_out_option(CLI::App* cmd, Options& o) {
  o.out_opt = cmd->add_option(
      "--out", o.out,
      "Output CSV path (default: <command>.csv in $SELFFORCE_OUT_DIR or .)");
}

sf_component resolve_component(const Options& o) {
  const bool neutralizer_off = o.neutralizer == "off";
  if (neutralizer_off) {
    if (o.component_opt != nullptr && o.component_opt->count() > 0 &&
        o.component != "self") {
      std::fprintf(stderr,
                   "selfforce-cli: --neutralizer off means the bare sphere's "
                   "own field only; --component %s contradicts it\n",
                   o.component.c_str());
      std::exit(kExitUsage);
    }
    return SF_COMPONENT_SELF;
  }
  if (o.component == "self") {
    return SF_COMPONENT_SELF;
  }
  if (o.component == "electrostatic") {
    return SF_COMPONENT_ELECTROSTATIC;
  }
  return SF_COMPONENT_TOTAL;
}

std::vector<double> parse_grid(const std::string& spec) {
  double start = 0.0;
  double stop = 0.0;
  long count = 0;
  const auto c1 = spec.find(':');
  const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  bool ok = c1 != std::string::npos && c2 != std::string::npos;
  if (ok) {
    try {
      std::size_t used = 0;
      const std::string s0 = spec.substr(0, c1);
      const std::string s1 = spec.substr(c1 + 1, c2 - c1 - 1);
      const std::string s2 = spec.substr(c2 + 1);
      start = std::stod(s0, &used);
      ok = ok && used == s0.size();
      stop = std::stod(s1, &used);
      ok = ok && used == s1.size();
      count = std::stol(s2, &used);
      ok = ok && used == s2.size();
    } catch (const std::exception&) {
      ok = false;
    }
  }
  if (!ok || count < 1 || (count > 1 && !(stop >= start))) {
    std::fprintf(stderr,
                 "selfforce-cli: bad --grid '%s' (expected start:stop:count)\n",
                 spec.c_str());
    std::exit(kExitUsage);
  }
  std::vector<double> grid;
  grid.reserve(count);
  if (count == 1) {
    grid.push_back(start);
  } else {
    for (long i = 0; i < count; ++i) {
      grid.push_back(start + (stop - start) * static_cast<double>(i) /
                                 static_cast<double>(count - 1));
    }
  }
  return grid;
}

std::vector<double> grid_or_default(const Options& o, double start,
                                    double stop, long count) {
  if (o.grid_opt != nullptr && o.grid_opt->count() > 0) {
    return parse_grid(o.grid);
  }
  std::vector<double> grid;
  grid.reserve(count);
  for (long i = 0; i < count; ++i) {
    grid.push_back(start + (stop - start) * static_cast<double>(i) /
                               static_cast<double>(count - 1));
  }
  return grid;
}

std::string output_path(const Options& o, const std::string& command,
                        const char* extension = ".csv") {
  std::filesystem::path path;
  if (o.out_opt != nullptr && o.out_opt->count() > 0) {
    path = o.out;
  } else {
    const char* dir = std::getenv("SELFFORCE_OUT_DIR");
    path = std::filesystem::path(dir != nullptr ? dir : ".") /
           (command + extension);
  }
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  return path.string();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: LF line endings only
  if (!out) {
    std::fprintf(stderr, "selfforce-cli: cannot open '%s' for writing\n",
                 path.c_str());
    std::exit(6);
  }
  return out;
}

// Builds the trajectory described by --traj.  For file: specs the window
// length and amplitude come from the file header, so explicit --T or
// --amplitude flags are rejected as contradictory.
TrajectoryHandle make_trajectory(const Options& o, double duration,
                                 double amplitude) {
  TrajectoryHandle handle;
  if (o.traj == "step") {
    check(sf_trajectory_create_steplike(duration, amplitude, &handle.ptr),
          "creating steplike trajectory");
  } else if (o.traj == "cosine") {
    check(sf_trajectory_create_raised_cosine(duration, amplitude, &handle.ptr),
          "creating raised-cosine trajectory");
  } else if (o.traj.rfind("poly:", 0) == 0) {
    std::vector<double> coeffs;
    std::string rest = o.traj.substr(5);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const auto comma = rest.find(',', pos);
      const std::string tok =
          rest.substr(pos, comma == std::string::npos ? comma : comma - pos);
      try {
        std::size_t used = 0;
        coeffs.push_back(std::stod(tok, &used));
        if (used != tok.size()) {
          throw std::invalid_argument(tok);
        }
      } catch (const std::exception&) {
        std::fprintf(stderr,
                     "selfforce-cli: bad poly coefficient '%s' in --traj\n",
                     tok.c_str());
        std::exit(kExitUsage);
      }
      if (comma == std::string::npos) {
        break;
      }
      pos = comma + 1;
    }
    check(sf_trajectory_create_polynomial(duration, coeffs.data(),
                                          coeffs.size(), amplitude,
                                          &handle.ptr),
          "creating polynomial trajectory");
  } else if (o.traj.rfind("file:", 0) == 0) {
    const std::string path = o.traj.substr(5);
    const bool t_given = o.duration_opt != nullptr && o.duration_opt->count() > 0;
    const bool amp_given =
        o.amplitude_opt != nullptr && o.amplitude_opt->count() > 0;
    if (t_given || amp_given) {
      std::fprintf(stderr,
                   "selfforce-cli: --traj file: takes T and amplitude from "
                   "the file header; drop --T/--amplitude\n");
      std::exit(kExitUsage);
    }
    check(sf_trajectory_create_from_file(path.c_str(), &handle.ptr),
          "reading trajectory file");
  } else {
    std::fprintf(stderr, "selfforce-cli: unknown --traj '%s'\n",
                 o.traj.c_str());
    std::exit(kExitUsage);
  }
  return handle;
}

double effective_duration(const Options& o, double fallback) {
  if (o.duration_opt != nullptr && o.duration_opt->count() > 0) {
    return o.duration;
  }
  return fallback;
}

const char* component_label(sf_component c) {
  switch (c) {
    case SF_COMPONENT_TOTAL:
      return "total";
    case SF_COMPONENT_SELF:
      return "self";
    case SF_COMPONENT_ELECTROSTATIC:
      return "electrostatic";
  }
  return "?";
}

void write_file_header(std::ofstream& out, const std::string& command,
                       const std::string& config) {
  out << "# selfforce-cli " << sf_version() << "\n";
  out << "# command: " << command << "\n";
  out << "# config: " << config << "\n";
  out << "# units: c = 1\n";
}

double body_scale(const BodyHandle& body, double rho) {
  double volume = 0.0;
  check(sf_body_volume(body.ptr, &volume), "querying body volume");
  return rho * rho * volume * volume;
}

/* ---- command handlers --------------------------------------------------- */

int run_axx(const Options& o) {
  BodyHandle body;
  check(sf_body_create(o.radius, o.rho, &body.ptr), "creating body");
  const sf_component comp = resolve_component(o);
  const double T = effective_duration(o, 1.5 * o.radius);

  double axx = 0.0;
  check(sf_eval_axx(body.ptr, T, comp, &axx), "evaluating Axx");
  double phi_step = 0.0;
  check(sf_step_phi_avg(body.ptr, T, comp, &phi_step),
        "evaluating averaged steplike response");

  const std::string path = output_path(o, "axx");
  std::ofstream out = open_output(path);
  write_file_header(out, "axx",
                    "T=" + fmt17(T) + " radius=" + fmt17(o.radius) +
                        " rho=" + fmt17(o.rho) +
                        " component=" + component_label(comp));
  out << "T,axx,phi_step_avg\n";
  out << fmt17(T) << ',' << fmt17(axx) << ',' << fmt17(phi_step) << '\n';
  std::printf("Axx(T=%s, %s) = %s   phi_step_avg = %s\n", fmt17(T).c_str(),
              component_label(comp), fmt17(axx).c_str(),
              fmt17(phi_step).c_str());
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int run_favg(const Options& o) {
  BodyHandle body;
  check(sf_body_create(o.radius, o.rho, &body.ptr), "creating body");
  const sf_component comp = resolve_component(o);
  const double T = effective_duration(o, 1.5 * o.radius);
  TrajectoryHandle traj = make_trajectory(o, T, o.amplitude);

  double duration = 0.0;
  double amplitude = 0.0;
  check(sf_trajectory_duration(traj.ptr, &duration), "querying trajectory");
  check(sf_trajectory_amplitude(traj.ptr, &amplitude), "querying trajectory");

  sf_force_result res{};
  if (o.traj == "step") {
    double phi = 0.0;
    check(sf_step_phi_avg(body.ptr, duration, comp, &phi),
          "evaluating averaged steplike response");
    res.normalized = phi;
    res.value = body_scale(body, o.rho) * amplitude * phi;
    res.series_terms_used = 0;
    res.truncation_estimate = 0.0;
  } else {
    check(sf_avg_force_series(traj.ptr, body.ptr, comp, o.tol, o.n_max, &res),
          "evaluating averaged force series");
  }

  const std::string path = output_path(o, "favg");
  std::ofstream out = open_output(path);
  write_file_header(out, "favg",
                    "T=" + fmt17(duration) + " radius=" + fmt17(o.radius) +
                        " rho=" + fmt17(o.rho) + " traj=" + o.traj +
                        " amplitude=" + fmt17(amplitude) +
                        " component=" + std::string(component_label(comp)) +
                        " tol=" + fmt17(o.tol) +
                        " n_max=" + std::to_string(o.n_max));
  out << "T,amplitude,component,favg,phi_avg,series_terms,"
         "truncation_estimate\n";
  out << fmt17(duration) << ',' << fmt17(amplitude) << ','
      << component_label(comp) << ',' << fmt17(res.value) << ','
      << fmt17(res.normalized) << ',' << res.series_terms_used << ','
      << fmt17(res.truncation_estimate) << '\n';
  std::printf("favg = %s   phi_avg = %s   (terms=%d)\n",
              fmt17(res.value).c_str(), fmt17(res.normalized).c_str(),
              res.series_terms_used);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int run_force(const Options& o) {
  BodyHandle body;
  check(sf_body_create(o.radius, o.rho, &body.ptr), "creating body");
  const sf_component comp = resolve_component(o);
  const double T = effective_duration(o, 1.5 * o.radius);
  TrajectoryHandle traj = make_trajectory(o, T, o.amplitude);

  double duration = 0.0;
  double amplitude = 0.0;
  check(sf_trajectory_duration(traj.ptr, &duration), "querying trajectory");
  check(sf_trajectory_amplitude(traj.ptr, &amplitude), "querying trajectory");
  const double scale = body_scale(body, o.rho) * amplitude;

  const std::vector<double> grid = grid_or_default(
      o, -0.5 * o.radius, duration + 2.5 * o.radius, 400);

  const std::string path = output_path(o, "force");
  std::ofstream out = open_output(path);
  write_file_header(out, "force",
                    "T=" + fmt17(duration) + " radius=" + fmt17(o.radius) +
                        " rho=" + fmt17(o.rho) + " traj=" + o.traj +
                        " amplitude=" + fmt17(amplitude) +
                        " component=" + std::string(component_label(comp)) +
                        " tol=" + fmt17(o.tol) +
                        " n_max=" + std::to_string(o.n_max) + " grid=" +
                        fmt17(grid.front()) + ":" + fmt17(grid.back()) + ":" +
                        std::to_string(grid.size()));
  out << "t2,force,phi,series_terms,truncation_estimate\n";
  for (double t2 : grid) {
    if (o.traj == "step") {
      double phi = 0.0;
      check(sf_step_phi_at(body.ptr, t2, duration, comp, &phi),
            "evaluating steplike response");
      out << fmt17(t2) << ',' << fmt17(scale * phi) << ',' << fmt17(phi)
          << ",0,0\n";
      continue;
    }
    sf_force_result res{};
    const sf_status st = sf_force_at_time_series(traj.ptr, t2, body.ptr, comp,
                                                 o.tol, o.n_max, &res);
    if (st == SF_OK) {
      out << fmt17(t2) << ',' << fmt17(res.value) << ','
          << fmt17(res.normalized) << ',' << res.series_terms_used << ','
          << fmt17(res.truncation_estimate) << '\n';
    } else {
      out << fmt17(t2) << ",nan,nan,0,nan\n";
      out << "# error: t2=" << fmt17(t2) << " " << status_name(st) << ": "
          << sf_last_error() << "\n";
    }
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int run_fig1(const Options& o) {
  BodyHandle body;
  check(sf_body_create(o.radius, o.rho, &body.ptr), "creating body");
  const std::vector<double> grid =
      grid_or_default(o, 0.02 * o.radius, 8.0 * o.radius, 400);

  const std::string path = output_path(o, "fig1");
  std::ofstream out = open_output(path);
  write_file_header(out, "fig1",
                    "radius=" + fmt17(o.radius) + " rho=" + fmt17(o.rho) +
                        " component=total tol=" + fmt17(o.tol) +
                        " n_max=" + std::to_string(o.n_max) + " grid=" +
                        fmt17(grid.front()) + ":" + fmt17(grid.back()) + ":" +
                        std::to_string(grid.size()));
  out << "T,phi_avg_cosine,phi_avg_steplike\n";
  for (double T : grid) {
    double phi_step = 0.0;
    check(sf_step_phi_avg(body.ptr, T, SF_COMPONENT_TOTAL, &phi_step),
          "evaluating averaged steplike response");

    TrajectoryHandle cosine;
    check(sf_trajectory_create_raised_cosine(T, 1.0, &cosine.ptr),
          "creating raised-cosine trajectory");
    sf_force_result res{};
    const sf_status st = sf_avg_force_series(cosine.ptr, body.ptr,
                                             SF_COMPONENT_TOTAL, o.tol,
                                             o.n_max, &res);
    if (st == SF_OK) {
      out << fmt17(T) << ',' << fmt17(res.normalized) << ','
          << fmt17(phi_step) << '\n';
    } else {
      out << fmt17(T) << ",nan," << fmt17(phi_step) << '\n';
      out << "# error: T=" << fmt17(T) << " " << status_name(st) << ": "
          << sf_last_error() << "\n";
    }
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int run_fig23(const Options& o, const char* name, double default_kappa) {
  BodyHandle body;
  check(sf_body_create(o.radius, o.rho, &body.ptr), "creating body");
  const double T = effective_duration(o, default_kappa * o.radius);
  const std::vector<double> grid = grid_or_default(
      o, -0.5 * o.radius, T + 2.5 * o.radius, 400);

  TrajectoryHandle cosine;
  check(sf_trajectory_create_raised_cosine(T, 1.0, &cosine.ptr),
        "creating raised-cosine trajectory");

  const std::string path = output_path(o, name);
  std::ofstream out = open_output(path);
  write_file_header(out, name,
                    "T=" + fmt17(T) + " radius=" + fmt17(o.radius) + " rho=" +
                        fmt17(o.rho) + " component=total tol=" + fmt17(o.tol) +
                        " n_max=" + std::to_string(o.n_max) + " grid=" +
                        fmt17(grid.front()) + ":" + fmt17(grid.back()) + ":" +
                        std::to_string(grid.size()));
  out << "t2,phi_cosine,phi_steplike\n";
  for (double t2 : grid) {
    double phi_step = 0.0;
    check(sf_step_phi_at(body.ptr, t2, T, SF_COMPONENT_TOTAL, &phi_step),
          "evaluating steplike response");
    sf_force_result res{};
    const sf_status st = sf_force_at_time_series(
        cosine.ptr, t2, body.ptr, SF_COMPONENT_TOTAL, o.tol, o.n_max, &res);
    if (st == SF_OK) {
      out << fmt17(t2) << ',' << fmt17(res.normalized) << ','
          << fmt17(phi_step) << '\n';
    } else {
      out << fmt17(t2) << ",nan," << fmt17(phi_step) << '\n';
      out << "# error: t2=" << fmt17(t2) << " " << status_name(st) << ": "
          << sf_last_error() << "\n";
    }
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int run_verify(const Options& o) {
  BodyHandle body;
  check(sf_body_create(o.radius, o.rho, &body.ptr), "creating body");

  sf_verify_options opts;
  sf_verify_options_default(&opts);
  if (o.samples > 0) {
    opts.sample_count = o.samples;
  }
  if (o.seed != 0) {
    opts.seed = o.seed;
  }
  opts.bin_count = o.bins;
  opts.parallel_chunks = o.chunks;
  opts.perturb_kernel = o.perturb_kernel;

  std::string prefix;
  if (o.out_opt != nullptr && o.out_opt->count() > 0) {
    prefix = o.out;
    std::filesystem::path p(prefix);
    if (p.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(p.parent_path(), ec);
    }
  } else {
    const char* dir = std::getenv("SELFFORCE_OUT_DIR");
    prefix = (std::filesystem::path(dir != nullptr ? dir : ".") / "verify")
                 .string();
  }
  const std::string text_path = prefix + ".txt";
  const std::string csv_path = prefix + ".csv";

  int all_pass = 0;
  int failed = 0;
  check(sf_verify_run(body.ptr, &opts, text_path.c_str(), csv_path.c_str(),
                      &all_pass, &failed),
        "running verification sweep");

  // Echo the text report.
  std::ifstream in(text_path);
  std::cout << in.rdbuf();
  std::printf("wrote %s and %s\n", text_path.c_str(), csv_path.c_str());
  return all_pass != 0 ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Classical electromagnetic self-force on a uniformly charged sphere "
      "undergoing a small, slow, temporary displacement (units c = 1)"};
  app.require_subcommand(1);

  Options axx_o, favg_o, force_o, fig1_o, fig2_o, fig3_o, verify_o;

  CLI::App* axx = app.add_subcommand(
      "axx", "Averaged steplike force response per unit displacement");
  add_body_options(axx, axx_o);
  add_component_options(axx, axx_o);
  axx_o.duration_opt =
      axx->add_option("--T", axx_o.duration, "Displacement window length");
  add_out_option(axx, axx_o);

  CLI::App* favg = app.add_subcommand(
      "favg", "Window-averaged force for a trajectory");
  add_body_options(favg, favg_o);
  add_component_options(favg, favg_o);
  add_trajectory_options(favg, favg_o);
  add_series_options(favg, favg_o);
  add_out_option(favg, favg_o);

  CLI::App* force = app.add_subcommand(
      "force", "Instantaneous force on a time grid");
  add_body_options(force, force_o);
  add_component_options(force, force_o);
  add_trajectory_options(force, force_o);
  add_series_options(force, force_o);
  force_o.grid_opt = force->add_option(
      "--grid", force_o.grid, "t2 grid start:stop:count");
  add_out_option(force, force_o);

  CLI::App* fig1 = app.add_subcommand(
      "fig1", "Averaged response against window length: raised cosine vs "
              "steplike");
  add_body_options(fig1, fig1_o);
  add_series_options(fig1, fig1_o);
  fig1_o.grid_opt =
      fig1->add_option("--grid", fig1_o.grid, "T grid start:stop:count");
  add_out_option(fig1, fig1_o);

  CLI::App* fig2 = app.add_subcommand(
      "fig2", "Instantaneous response, short window (default T = 1.5R)");
  add_body_options(fig2, fig2_o);
  add_series_options(fig2, fig2_o);
  fig2_o.duration_opt =
      fig2->add_option("--T", fig2_o.duration, "Displacement window length");
  fig2_o.grid_opt =
      fig2->add_option("--grid", fig2_o.grid, "t2 grid start:stop:count");
  add_out_option(fig2, fig2_o);

  CLI::App* fig3 = app.add_subcommand(
      "fig3", "Instantaneous response, longer window (default T = 2.5R)");
  add_body_options(fig3, fig3_o);
  add_series_options(fig3, fig3_o);
  fig3_o.duration_opt =
      fig3->add_option("--T", fig3_o.duration, "Displacement window length");
  fig3_o.grid_opt =
      fig3->add_option("--grid", fig3_o.grid, "t2 grid start:stop:count");
  add_out_option(fig3, fig3_o);

  CLI::App* verify = app.add_subcommand(
      "verify", "Run every closed-form-versus-oracle check and report");
  add_body_options(verify, verify_o);
  verify->add_option("--samples", verify_o.samples,
                     "Monte-Carlo pair samples (default 10^7)");
  verify->add_option("--seed", verify_o.seed, "Monte-Carlo seed");
  verify->add_option("--bins", verify_o.bins,
                     "Histogram bins (0: automatic, otherwise >= 50)");
  verify->add_option("--chunks", verify_o.chunks,
                     "Worker threads (0: hardware; result is identical "
                     "either way)");
  verify->add_option("--perturb-kernel", verify_o.perturb_kernel,
                     "Negative control: scales the closed-form kernel by "
                     "(1 + x); nonzero values must make the sweep fail");
  add_out_option(verify, verify_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (axx->parsed()) {
    return run_axx(axx_o);
  }
  if (favg->parsed()) {
    return run_favg(favg_o);
  }
  if (force->parsed()) {
    return run_force(force_o);
  }
  if (fig1->parsed()) {
    return run_fig1(fig1_o);
  }
  if (fig2->parsed()) {
    return run_fig23(fig2_o, "fig2", 1.5);
  }
  if (fig3->parsed()) {
    return run_fig23(fig3_o, "fig3", 2.5);
  }
  if (verify->parsed()) {
    return run_verify(verify_o);
  }
  return kExitUsage;
}
