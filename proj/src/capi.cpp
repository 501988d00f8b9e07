#include "selfforce/selfforce.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "selfforce/errors.hpp"
#include "selfforce/geometry.hpp"
#include "selfforce/oracle.hpp"
#include "selfforce/self_force.hpp"
#include "selfforce/trajectory.hpp"
#include "selfforce/verify.hpp"
#include "selfforce/version.hpp"

struct sf_body {
  selfforce::SphereBody impl;
};

struct sf_trajectory {
  selfforce::Trajectory impl;
};

namespace {

thread_local std::string g_last_error;

sf_status fail(sf_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Maps the active exception onto a status code and stores its message.
sf_status translate_exception() {
  try {
    throw;
  } catch (const selfforce::UnsupportedOrderError& e) {
    g_last_error = e.what();
    return SF_ERROR_UNSUPPORTED_ORDER;
  } catch (const selfforce::DomainError& e) {
    g_last_error = e.what();
    return SF_ERROR_DOMAIN;
  } catch (const selfforce::ConvergenceError& e) {
    g_last_error = e.what();
    return SF_ERROR_NO_CONVERGENCE;
  } catch (const selfforce::QuadratureError& e) {
    g_last_error = e.what();
    return SF_ERROR_QUADRATURE;
  } catch (const selfforce::ParseError& e) {
    g_last_error = e.what();
    return SF_ERROR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SF_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SF_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SF_ERROR_INTERNAL;
  }
}

template <typename Fn>
sf_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SF_OK;
  } catch (...) {
    return translate_exception();
  }
}

bool to_component(sf_component c, selfforce::ForceComponent* out) {
  switch (c) {
    case SF_COMPONENT_TOTAL:
      *out = selfforce::ForceComponent::total_with_neutralizer;
      return true;
    case SF_COMPONENT_SELF:
      *out = selfforce::ForceComponent::self_force_only;
      return true;
    case SF_COMPONENT_ELECTROSTATIC:
      *out = selfforce::ForceComponent::electrostatic_only;
      return true;
  }
  return false;
}

void fill_result(const selfforce::ForceResult& in, sf_force_result* out) {
  out->value = in.value;
  out->normalized = in.normalized;
  out->series_terms_used = in.series_terms_used;
  out->truncation_estimate = in.truncation_estimate;
}

}  // namespace

extern "C" {

const char* sf_version(void) { return selfforce::version_string; }

const char* sf_last_error(void) { return g_last_error.c_str(); }

/* ---- body ------------------------------------------------------------ */

sf_status sf_body_create(double radius, double charge_density, sf_body** out) {
  if (out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_body_create: out is NULL");
  }
  *out = nullptr;
  return guarded([&] {
    *out = new sf_body{selfforce::SphereBody(radius, charge_density)};
  });
}

void sf_body_destroy(sf_body* body) { delete body; }

#define SF_BODY_GETTER(name, expr)                                         \
  sf_status name(const sf_body* body, double* out) {                       \
    if (body == nullptr || out == nullptr) {                               \
      return fail(SF_ERROR_INVALID_ARGUMENT, #name ": NULL argument");     \
    }                                                                      \
    return guarded([&] { *out = body->impl.expr; });                       \
  }

SF_BODY_GETTER(sf_body_radius, radius())
SF_BODY_GETTER(sf_body_charge_density, charge_density())
SF_BODY_GETTER(sf_body_volume, volume())
SF_BODY_GETTER(sf_body_total_charge, total_charge())

#undef SF_BODY_GETTER

/* ---- geometric kernels ------------------------------------------------ */

sf_status sf_eval_i(const sf_body* body, double s, double* value,
                    int* in_support) {
  if (body == nullptr || value == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_eval_i: NULL argument");
  }
  return guarded([&] {
    const selfforce::KernelValue kv = selfforce::eval_I(s, body->impl);
    *value = kv.value;
    if (in_support != nullptr) {
      *in_support = kv.in_support ? 1 : 0;
    }
  });
}

sf_status sf_eval_k(double zeta2, double xi, double* value, int* in_support) {
  if (value == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_eval_k: value is NULL");
  }
  return guarded([&] {
    const selfforce::KernelValue kv = selfforce::eval_K(zeta2, xi);
    *value = kv.value;
    if (in_support != nullptr) {
      *in_support = kv.in_support ? 1 : 0;
    }
  });
}

sf_status sf_pair_moment(const sf_body* body, int n, double* value) {
  if (body == nullptr || value == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_pair_moment: NULL argument");
  }
  return guarded([&] { *value = selfforce::pair_moment(n, body->impl); });
}

/* ---- trajectories ------------------------------------------------------ */

sf_status sf_trajectory_create_steplike(double duration, double amplitude,
                                        sf_trajectory** out) {
  if (out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_trajectory_create_steplike: out is NULL");
  }
  *out = nullptr;
  return guarded([&] {
    *out = new sf_trajectory{
        selfforce::Trajectory::steplike(duration, amplitude)};
  });
}

sf_status sf_trajectory_create_raised_cosine(double duration, double amplitude,
                                             sf_trajectory** out) {
  if (out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_trajectory_create_raised_cosine: out is NULL");
  }
  *out = nullptr;
  return guarded([&] {
    *out = new sf_trajectory{
        selfforce::Trajectory::raised_cosine(duration, amplitude)};
  });
}

sf_status sf_trajectory_create_polynomial(double duration,
                                          const double* coefficients,
                                          size_t coefficient_count,
                                          double amplitude,
                                          sf_trajectory** out) {
  if (out == nullptr || (coefficients == nullptr && coefficient_count > 0)) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_trajectory_create_polynomial: NULL argument");
  }
  *out = nullptr;
  return guarded([&] {
    std::vector<double> coeffs(coefficients, coefficients + coefficient_count);
    *out = new sf_trajectory{selfforce::Trajectory::polynomial(
        duration, std::move(coeffs), amplitude)};
  });
}

sf_status sf_trajectory_create_custom(double duration, double amplitude,
                                      sf_shape_fn shape, void* user_data,
                                      int derivative_order_available,
                                      sf_trajectory** out) {
  if (out == nullptr || shape == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_trajectory_create_custom: NULL argument");
  }
  *out = nullptr;
  return guarded([&] {
    auto fn = [shape, user_data](double t, int order) {
      return shape(t, order, user_data);
    };
    *out = new sf_trajectory{selfforce::Trajectory::custom(
        duration, amplitude, fn, derivative_order_available)};
  });
}

sf_status sf_trajectory_create_from_file(const char* path,
                                         sf_trajectory** out) {
  if (out == nullptr || path == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_trajectory_create_from_file: NULL argument");
  }
  *out = nullptr;
  return guarded([&] {
    *out = new sf_trajectory{selfforce::Trajectory::from_file(path)};
  });
}

void sf_trajectory_destroy(sf_trajectory* trajectory) { delete trajectory; }

sf_status sf_trajectory_duration(const sf_trajectory* trajectory,
                                 double* out) {
  if (trajectory == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_trajectory_duration: NULL argument");
  }
  return guarded([&] { *out = trajectory->impl.duration(); });
}

sf_status sf_trajectory_amplitude(const sf_trajectory* trajectory,
                                  double* out) {
  if (trajectory == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_trajectory_amplitude: NULL argument");
  }
  return guarded([&] { *out = trajectory->impl.amplitude(); });
}

sf_status sf_trajectory_value(const sf_trajectory* trajectory, double t,
                              double* out) {
  if (trajectory == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_trajectory_value: NULL argument");
  }
  return guarded([&] { *out = trajectory->impl.value(t); });
}

sf_status sf_trajectory_derivative(const sf_trajectory* trajectory, double t,
                                   int n, double* out) {
  if (trajectory == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_trajectory_derivative: NULL argument");
  }
  return guarded([&] { *out = trajectory->impl.derivative_at(t, n); });
}

sf_status sf_trajectory_derivative_at_zero(const sf_trajectory* trajectory,
                                           int n, double* out) {
  if (trajectory == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_trajectory_derivative_at_zero: NULL argument");
  }
  return guarded([&] { *out = trajectory->impl.derivative_at_zero_plus(n); });
}

sf_status sf_validate_br(const sf_trajectory* trajectory, const sf_body* body,
                         double threshold, sf_br_report* out) {
  if (trajectory == nullptr || body == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_validate_br: NULL argument");
  }
  return guarded([&] {
    const selfforce::BrConditionReport r =
        selfforce::validate_br(trajectory->impl, body->impl, threshold);
    out->max_abs_displacement_over_r = r.max_abs_displacement_over_r;
    out->max_abs_speed_over_c = r.max_abs_speed_over_c;
    out->satisfied = r.satisfied ? 1 : 0;
    out->threshold = r.threshold;
  });
}

/* ---- closed-form force responses -------------------------------------- */

sf_status sf_eval_f(const sf_body* body, double t1, double T,
                    sf_component component, double* out) {
  if (body == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_eval_f: NULL argument");
  }
  selfforce::ForceComponent comp;
  if (!to_component(component, &comp)) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_eval_f: bad component");
  }
  return guarded([&] { *out = selfforce::eval_f(t1, T, body->impl, comp); });
}

sf_status sf_eval_axx(const sf_body* body, double T, sf_component component,
                      double* out) {
  if (body == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_eval_axx: NULL argument");
  }
  selfforce::ForceComponent comp;
  if (!to_component(component, &comp)) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_eval_axx: bad component");
  }
  return guarded([&] { *out = selfforce::eval_Axx(T, body->impl, comp); });
}

sf_status sf_kernel_impulse_coefficient(const sf_body* body,
                                        sf_component component, double* out) {
  if (body == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_kernel_impulse_coefficient: NULL argument");
  }
  selfforce::ForceComponent comp;
  if (!to_component(component, &comp)) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_kernel_impulse_coefficient: bad component");
  }
  return guarded([&] {
    *out = selfforce::kernel_g(body->impl, comp).impulse_coefficient;
  });
}

sf_status sf_kernel_smooth(const sf_body* body, sf_component component,
                           double t, double* out) {
  if (body == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_kernel_smooth: NULL argument");
  }
  selfforce::ForceComponent comp;
  if (!to_component(component, &comp)) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_kernel_smooth: bad component");
  }
  return guarded([&] { *out = selfforce::kernel_g(body->impl, comp).smooth(t); });
}

sf_status sf_step_phi_avg(const sf_body* body, double T,
                          sf_component component, double* out) {
  if (body == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_step_phi_avg: NULL argument");
  }
  selfforce::ForceComponent comp;
  if (!to_component(component, &comp)) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_step_phi_avg: bad component");
  }
  return guarded([&] { *out = selfforce::step_phi_avg(T, body->impl, comp); });
}

sf_status sf_step_phi_at(const sf_body* body, double t2, double T,
                         sf_component component, double* out) {
  if (body == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_step_phi_at: NULL argument");
  }
  selfforce::ForceComponent comp;
  if (!to_component(component, &comp)) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_step_phi_at: bad component");
  }
  return guarded([&] {
    *out = selfforce::step_phi_at(t2, T, body->impl, comp);
  });
}

/* ---- series force evaluations ------------------------------------------ */

sf_status sf_avg_force_series(const sf_trajectory* trajectory,
                              const sf_body* body, sf_component component,
                              double tol, int n_max, sf_force_result* out) {
  if (trajectory == nullptr || body == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_avg_force_series: NULL argument");
  }
  selfforce::ForceComponent comp;
  if (!to_component(component, &comp)) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_avg_force_series: bad component");
  }
  return guarded([&] {
    fill_result(selfforce::avg_force_series(trajectory->impl, body->impl,
                                            comp, tol, n_max),
                out);
  });
}

sf_status sf_force_at_time_series(const sf_trajectory* trajectory, double t2,
                                  const sf_body* body, sf_component component,
                                  double tol, int n_max,
                                  sf_force_result* out) {
  if (trajectory == nullptr || body == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_force_at_time_series: NULL argument");
  }
  selfforce::ForceComponent comp;
  if (!to_component(component, &comp)) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_force_at_time_series: bad component");
  }
  return guarded([&] {
    fill_result(selfforce::force_at_time_series(trajectory->impl, t2,
                                                body->impl, comp, tol, n_max),
                out);
  });
}

sf_status sf_force_current_derivatives(const sf_trajectory* trajectory,
                                       double t2, const sf_body* body,
                                       sf_component component, double tol,
                                       int n_max, sf_force_result* out) {
  if (trajectory == nullptr || body == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_force_current_derivatives: NULL argument");
  }
  selfforce::ForceComponent comp;
  if (!to_component(component, &comp)) {
    return fail(SF_ERROR_INVALID_ARGUMENT,
                "sf_force_current_derivatives: bad component");
  }
  return guarded([&] {
    fill_result(
        selfforce::force_current_derivatives(trajectory->impl, t2, body->impl,
                                             comp, tol, n_max),
        out);
  });
}

/* ---- independent numerical oracles ------------------------------------- */

sf_status sf_quad_avg_force(const sf_trajectory* trajectory,
                            const sf_body* body, sf_component component,
                            double* out) {
  if (trajectory == nullptr || body == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_quad_avg_force: NULL argument");
  }
  selfforce::ForceComponent comp;
  if (!to_component(component, &comp)) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_quad_avg_force: bad component");
  }
  return guarded([&] {
    *out = selfforce::quad_avg_force(trajectory->impl, body->impl, comp);
  });
}

sf_status sf_conv_force(const sf_trajectory* trajectory, const sf_body* body,
                        double t2, sf_component component, double* out) {
  if (trajectory == nullptr || body == nullptr || out == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_conv_force: NULL argument");
  }
  selfforce::ForceComponent comp;
  if (!to_component(component, &comp)) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_conv_force: bad component");
  }
  return guarded([&] {
    *out = selfforce::conv_force(trajectory->impl, body->impl, t2, comp);
  });
}

/* ---- verification sweep ------------------------------------------------ */

void sf_verify_options_default(sf_verify_options* out) {
  if (out == nullptr) {
    return;
  }
  const selfforce::McConfig defaults;
  out->sample_count = defaults.sample_count;
  out->seed = defaults.seed;
  out->bin_count = defaults.bin_count;
  out->parallel_chunks = defaults.parallel_chunks;
  out->perturb_kernel = 0.0;
}

sf_status sf_verify_run(const sf_body* body, const sf_verify_options* options,
                        const char* text_path, const char* csv_path,
                        int* all_pass, int* checks_failed) {
  if (body == nullptr || all_pass == nullptr) {
    return fail(SF_ERROR_INVALID_ARGUMENT, "sf_verify_run: NULL argument");
  }
  return guarded([&] {
    selfforce::VerifyOptions opts;
    if (options != nullptr) {
      if (options->sample_count > 0) {
        opts.mc.sample_count = options->sample_count;
      }
      opts.mc.seed = options->seed;
      opts.mc.bin_count = options->bin_count;
      opts.mc.parallel_chunks = options->parallel_chunks;
      opts.perturb_kernel = options->perturb_kernel;
    }
    const selfforce::VerifyResult result =
        selfforce::run_verification(body->impl, opts);
    if (text_path != nullptr) {
      std::ofstream out(text_path);
      if (!out) {
        throw selfforce::ParseError(std::string("cannot open '") + text_path +
                                    "' for writing");
      }
      result.write_text(out);
    }
    if (csv_path != nullptr) {
      std::ofstream out(csv_path);
      if (!out) {
        throw selfforce::ParseError(std::string("cannot open '") + csv_path +
                                    "' for writing");
      }
      result.write_csv(out);
    }
    *all_pass = result.all_pass ? 1 : 0;
    if (checks_failed != nullptr) {
      *checks_failed = result.checks_failed;
    }
  });
}

} /* extern "C" */
