/*
 * C interface to the selfforce library: classical electromagnetic
 * self-force on a uniformly charged rigid sphere undergoing a small, slow,
 * temporary displacement (units c = 1).
 *
 * Conventions:
 *   - Objects are opaque handles created by sf_*_create and released by the
 *     matching sf_*_destroy (destroy tolerates NULL).
 *   - Every fallible function returns sf_status; outputs are written through
 *     pointers only on SF_OK.  sf_last_error() returns a human-readable
 *     message for the most recent failure on the calling thread.
 *   - Passing a NULL handle or NULL output pointer yields
 *     SF_ERROR_INVALID_ARGUMENT.
 */

#ifndef SELFFORCE_H
#define SELFFORCE_H

#include <stddef.h>

#if defined(_WIN32)
#define SF_EXPORT __declspec(dllexport)
#else
#define SF_EXPORT __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sf_status {
  SF_OK = 0,
  SF_ERROR_INVALID_ARGUMENT = 1, /* NULL pointer, bad enum value, ... */
  SF_ERROR_DOMAIN = 2,           /* argument outside mathematical domain */
  SF_ERROR_UNSUPPORTED_ORDER = 3,/* derivative order beyond profile's reach */
  SF_ERROR_NO_CONVERGENCE = 4,   /* series failed its tolerance */
  SF_ERROR_QUADRATURE = 5,       /* quadrature failed its error target */
  SF_ERROR_IO = 6,               /* file could not be read/written/parsed */
  SF_ERROR_INTERNAL = 7
} sf_status;

typedef enum sf_component {
  SF_COMPONENT_TOTAL = 0,         /* self + electrostatic (neutralizer on) */
  SF_COMPONENT_SELF = 1,          /* retarded self-interaction only */
  SF_COMPONENT_ELECTROSTATIC = 2  /* neutralizer pull only */
} sf_component;

typedef struct sf_body sf_body;
typedef struct sf_trajectory sf_trajectory;

typedef struct sf_force_result {
  double value;      /* physical force, charge^2/length^2 */
  double normalized; /* value / (rho^2 V^2 amplitude), 1/length^3 */
  int series_terms_used;
  double truncation_estimate;
} sf_force_result;

typedef struct sf_br_report {
  double max_abs_displacement_over_r;
  double max_abs_speed_over_c; /* +inf for profiles with window-edge jumps */
  int satisfied;
  double threshold;
} sf_br_report;

typedef struct sf_verify_options {
  unsigned long long sample_count; /* Monte-Carlo pairs, >= 10^4 */
  unsigned long long seed;
  int bin_count;       /* 0: automatic; otherwise >= 50 */
  int parallel_chunks; /* 0: hardware concurrency */
  double perturb_kernel; /* negative-control knob; 0 for honest runs */
} sf_verify_options;

/* shape(t, order, user_data): order-th derivative of a custom dimensionless
 * profile; order = 0 is the profile value, t = 0 means the limit from
 * above. */
typedef double (*sf_shape_fn)(double t, int order, void* user_data);

SF_EXPORT const char* sf_version(void);
/* Message for the most recent error on this thread ("" if none). */
SF_EXPORT const char* sf_last_error(void);

/* ---- body ------------------------------------------------------------ */

SF_EXPORT sf_status sf_body_create(double radius, double charge_density,
                                   sf_body** out);
SF_EXPORT void sf_body_destroy(sf_body* body);
SF_EXPORT sf_status sf_body_radius(const sf_body* body, double* out);
SF_EXPORT sf_status sf_body_charge_density(const sf_body* body, double* out);
SF_EXPORT sf_status sf_body_volume(const sf_body* body, double* out);
SF_EXPORT sf_status sf_body_total_charge(const sf_body* body, double* out);

/* ---- geometric kernels ------------------------------------------------ */

/* Retarded-interaction kernel I(s); in_support (optional, may be NULL) is 1
 * inside the closed support [0, 2R]. */
SF_EXPORT sf_status sf_eval_i(const sf_body* body, double s, double* value,
                              int* in_support);
/* Shell-pair kernel K(zeta2, xi), 0 < zeta2 < 1. */
SF_EXPORT sf_status sf_eval_k(double zeta2, double xi, double* value,
                              int* in_support);
/* pair_moment(n) = V^2 E[r^(n-1)], n >= 0. */
SF_EXPORT sf_status sf_pair_moment(const sf_body* body, int n, double* value);

/* ---- trajectories ------------------------------------------------------ */

SF_EXPORT sf_status sf_trajectory_create_steplike(double duration,
                                                  double amplitude,
                                                  sf_trajectory** out);
SF_EXPORT sf_status sf_trajectory_create_raised_cosine(double duration,
                                                       double amplitude,
                                                       sf_trajectory** out);
SF_EXPORT sf_status sf_trajectory_create_polynomial(double duration,
                                                    const double* coefficients,
                                                    size_t coefficient_count,
                                                    double amplitude,
                                                    sf_trajectory** out);
SF_EXPORT sf_status sf_trajectory_create_custom(double duration,
                                                double amplitude,
                                                sf_shape_fn shape,
                                                void* user_data,
                                                int derivative_order_available,
                                                sf_trajectory** out);
/* Text format: "T=<v> amplitude=<v>" then one line of polynomial shape
 * coefficients.  '#' lines are comments. */
SF_EXPORT sf_status sf_trajectory_create_from_file(const char* path,
                                                   sf_trajectory** out);
SF_EXPORT void sf_trajectory_destroy(sf_trajectory* trajectory);

SF_EXPORT sf_status sf_trajectory_duration(const sf_trajectory* trajectory,
                                           double* out);
SF_EXPORT sf_status sf_trajectory_amplitude(const sf_trajectory* trajectory,
                                            double* out);
/* Displacement D(t), exactly 0 outside the closed window [0, T]. */
SF_EXPORT sf_status sf_trajectory_value(const sf_trajectory* trajectory,
                                        double t, double* out);
/* n-th derivative of D at 0 < t < T. */
SF_EXPORT sf_status sf_trajectory_derivative(const sf_trajectory* trajectory,
                                             double t, int n, double* out);
/* One-sided n-th derivative of D at t = 0+. */
SF_EXPORT sf_status sf_trajectory_derivative_at_zero(
    const sf_trajectory* trajectory, int n, double* out);

/* Small/slow-regime check: |D| << R and |dD/dt| << c. */
SF_EXPORT sf_status sf_validate_br(const sf_trajectory* trajectory,
                                   const sf_body* body, double threshold,
                                   sf_br_report* out);

/* ---- closed-form force responses -------------------------------------- */

/* Steplike emission-time response f(t1), 0 < t1 < T. */
SF_EXPORT sf_status sf_eval_f(const sf_body* body, double t1, double T,
                              sf_component component, double* out);
/* Averaged steplike response per unit displacement, Axx(T). */
SF_EXPORT sf_status sf_eval_axx(const sf_body* body, double T,
                                sf_component component, double* out);
/* Impulse response g = c_delta * delta(t) + smooth(t). */
SF_EXPORT sf_status sf_kernel_impulse_coefficient(const sf_body* body,
                                                  sf_component component,
                                                  double* out);
SF_EXPORT sf_status sf_kernel_smooth(const sf_body* body,
                                     sf_component component, double t,
                                     double* out);

/* Normalized steplike responses (force / (rho^2 V^2 D_x)). */
SF_EXPORT sf_status sf_step_phi_avg(const sf_body* body, double T,
                                    sf_component component, double* out);
SF_EXPORT sf_status sf_step_phi_at(const sf_body* body, double t2, double T,
                                   sf_component component, double* out);

/* ---- series force evaluations ------------------------------------------ */

/* Window-averaged force via the derivatives-at-window-opening series. */
SF_EXPORT sf_status sf_avg_force_series(const sf_trajectory* trajectory,
                                        const sf_body* body,
                                        sf_component component, double tol,
                                        int n_max, sf_force_result* out);
/* Instantaneous force F(t2) via the same expansion. */
SF_EXPORT sf_status sf_force_at_time_series(const sf_trajectory* trajectory,
                                            double t2, const sf_body* body,
                                            sf_component component, double tol,
                                            int n_max, sf_force_result* out);
/* Instantaneous force via the current-derivatives expansion, 0 < t2 < T. */
SF_EXPORT sf_status sf_force_current_derivatives(
    const sf_trajectory* trajectory, double t2, const sf_body* body,
    sf_component component, double tol, int n_max, sf_force_result* out);

/* ---- independent numerical oracles ------------------------------------- */

/* Averaged force by adaptive quadrature of the instantaneous force. */
SF_EXPORT sf_status sf_quad_avg_force(const sf_trajectory* trajectory,
                                      const sf_body* body,
                                      sf_component component, double* out);
/* Instantaneous force by direct convolution with the impulse response. */
SF_EXPORT sf_status sf_conv_force(const sf_trajectory* trajectory,
                                  const sf_body* body, double t2,
                                  sf_component component, double* out);

/* ---- verification sweep ------------------------------------------------ */

SF_EXPORT void sf_verify_options_default(sf_verify_options* out);
/* Runs every closed-form-versus-oracle check.  Writes a text report and a
 * CSV table to the given paths (either may be NULL to skip).  all_pass gets
 * 1/0; checks_failed (optional) the number of failing checks.  Returns
 * SF_OK even when checks fail -- failure of the *sweep machinery* is what
 * the status reports. */
SF_EXPORT sf_status sf_verify_run(const sf_body* body,
                                  const sf_verify_options* options,
                                  const char* text_path, const char* csv_path,
                                  int* all_pass, int* checks_failed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SELFFORCE_H */
