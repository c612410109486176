/* C interface to the discrete-time mechanics library.
 *
 * Every function returns a dtm_status. On failure, dtm_last_error_message()
 * describes the problem (per thread, valid until the next call on that thread).
 * Handles are opaque and must be released with the matching *_free function.
 * Handles are immutable after creation and may be shared across threads.
 */
#ifndef DTM_DTM_H
#define DTM_DTM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DTM_BUILDING_LIBRARY)
#    define DTM_API __declspec(dllexport)
#  else
#    define DTM_API __declspec(dllimport)
#  endif
#else
#  define DTM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dtm_status {
  DTM_OK = 0,
  DTM_ERR_INVALID_ARGUMENT = 1,
  DTM_ERR_DIVERGENT_TRANSFORM = 2,
  DTM_ERR_QUADRATURE_NOT_CONVERGED = 3,
  DTM_ERR_FIT_UNSTABLE = 4,
  DTM_ERR_GRID_UNDER_RESOLVED = 5,
  DTM_ERR_BACKWARD_ONLY = 6,
  DTM_ERR_STIFFNESS_FAILURE = 7,
  DTM_ERR_INVALID_STATE = 8,
  DTM_ERR_SIGNAL_DOMAIN_EXCEEDED = 9,
  DTM_ERR_INTERNAL = 10
} dtm_status;

/* CamelCase error name, e.g. "DivergentTransform". */
DTM_API const char* dtm_status_name(dtm_status status);
/* Nonzero for failures of the numerics (divergence, convergence, fits, integration). */
DTM_API int dtm_status_is_numerical(dtm_status status);
DTM_API const char* dtm_last_error_message(void);
DTM_API const char* dtm_version(void);

/* 0 restores the default (DTMECH_THREADS, else hardware concurrency). */
DTM_API void dtm_set_thread_count(size_t count);
DTM_API size_t dtm_get_thread_count(void);

/* ---- kernel ------------------------------------------------------------ */

DTM_API dtm_status dtm_gamma_density(int n, double tau, double xi, double xi0, double* out);
DTM_API dtm_status dtm_log_gamma_density(int n, double tau, double xi, double xi0, double* out);

typedef struct dtm_signal dtm_signal;

DTM_API dtm_status dtm_signal_constant(double value, dtm_signal** out);
/* t^k, k >= 0. */
DTM_API dtm_status dtm_signal_power(int k, dtm_signal** out);
DTM_API dtm_status dtm_signal_cosine(double omega, dtm_signal** out);
/* e^{bt}; declares growth rate max(b, 0). */
DTM_API dtm_status dtm_signal_exponential(double rate, dtm_signal** out);
/* e^{i omega t}. */
DTM_API dtm_status dtm_signal_complex_exponential(double omega, dtm_signal** out);
/* Samples with t[0] = 0 and strictly increasing t; order 1 (linear) or 3 (cubic). */
DTM_API dtm_status dtm_signal_tabulated(const double* t, const double* values, size_t count, int order,
                                        dtm_signal** out);
/* Real signal evaluated by a callback. The callback may be called from several threads at once. */
typedef double (*dtm_real_function)(double t, void* user);
DTM_API dtm_status dtm_signal_callback(dtm_real_function fn, void* user, dtm_signal** out);
/* New signal with a declared bound |F(t)| <= C e^{rate t}. */
DTM_API dtm_status dtm_signal_with_growth_bound(const dtm_signal* signal, double rate, dtm_signal** out);
DTM_API dtm_status dtm_signal_eval(const dtm_signal* signal, double t, double* re, double* im);
DTM_API void dtm_signal_free(dtm_signal* signal);

typedef struct dtm_quadrature_options {
  int node_count;         /* 0 = default max(32, ceil(4 sqrt(n))) */
  double relative;        /* relative error target */
  double absolute;        /* absolute error floor */
  int allow_contour_rotation;
  int allow_panel_fallback;
} dtm_quadrature_options;

DTM_API void dtm_quadrature_options_default(dtm_quadrature_options* options);

typedef enum dtm_transform_path {
  DTM_PATH_IDENTITY = 0,
  DTM_PATH_ROTATED_RAY = 1,
  DTM_PATH_GAUSS_LAGUERRE = 2,
  DTM_PATH_ADAPTIVE_PANELS = 3
} dtm_transform_path;

DTM_API const char* dtm_transform_path_name(dtm_transform_path path);

typedef struct dtm_transform_result {
  double re;
  double im;
  double error_estimate;
  dtm_transform_path path;
  int nodes;
} dtm_transform_result;

/* Gamma transform at step n >= 0 (n = 0 returns F(0)). options may be NULL. */
DTM_API dtm_status dtm_transform(const dtm_signal* signal, int n, double tau,
                                 const dtm_quadrature_options* options, dtm_transform_result* out);

typedef struct dtm_monte_carlo_result {
  double re;
  double im;
  double standard_error;
  size_t samples;
} dtm_monte_carlo_result;

DTM_API dtm_status dtm_transform_monte_carlo(const dtm_signal* signal, int n, double tau, size_t samples,
                                             uint64_t seed, dtm_monte_carlo_result* out);
/* count internal times tau * Gamma(n, 1) from one seeded stream. */
DTM_API dtm_status dtm_sample_internal_times(int n, double tau, uint64_t seed, size_t count, double* out);

DTM_API dtm_status dtm_scheme_delta_coefficient(double alpha, int n, double* out);
/* Writes up to capacity (weight, shape) pairs; *count receives the number of terms.
 * weights and shapes may be NULL when capacity is 0. */
DTM_API dtm_status dtm_scheme_decomposition(double alpha, int n, double tau, double* delta_coefficient,
                                            double* weights, int* shapes, size_t capacity, size_t* count,
                                            double* scale);

typedef struct dtm_probe_summary {
  double minimum;
  double peak;
  double origin;
} dtm_probe_summary;

/* profile may be NULL; otherwise it receives points values. */
DTM_API dtm_status dtm_advection_probe(double alpha, int n, double tau, size_t points, double length,
                                       double sigma, dtm_probe_summary* out, double* profile);

/* ---- classical --------------------------------------------------------- */

typedef enum dtm_model_kind {
  DTM_MODEL_FREE_PARTICLE = 0,
  DTM_MODEL_HARMONIC_OSCILLATOR = 1,
  DTM_MODEL_CUSTOM = 2
} dtm_model_kind;

/* dz/dt = f(z) on z = (x_1..x_l, p_1..p_l), dim = 2l. */
typedef void (*dtm_vector_field)(const double* z, double* dz, size_t dim, void* user);
typedef double (*dtm_phase_function)(const double* x, const double* p, size_t dof, void* user);

typedef struct dtm_model {
  dtm_model_kind kind;
  dtm_vector_field field; /* DTM_MODEL_CUSTOM only */
  void* field_user;
} dtm_model;

/* masses may be NULL for unit masses. */
typedef struct dtm_phase_state {
  size_t dof;
  const double* x;
  const double* p;
  const double* masses;
} dtm_phase_state;

typedef struct dtm_moment_report dtm_moment_report;

/* Closed forms: free particle or unit oscillator. */
DTM_API dtm_status dtm_moments_closed_form(dtm_model_kind kind, const dtm_phase_state* state, double tau,
                                           int max_steps, dtm_moment_report** out);
/* Oscillator with common frequency omega and arbitrary masses. */
DTM_API dtm_status dtm_moments_oscillator_scaled(const dtm_phase_state* state, double omega, double tau,
                                                 int max_steps, dtm_moment_report** out);
/* Moments through the gamma transform along the trajectory. options may be NULL. */
DTM_API dtm_status dtm_moments_quadrature(const dtm_model* model, const dtm_phase_state* state, double tau,
                                          int max_steps, const dtm_quadrature_options* options,
                                          dtm_moment_report** out);
/* out receives max_steps + 1 values (n = 0..max_steps). */
DTM_API dtm_status dtm_evolve_observable(const dtm_model* model, const dtm_phase_state* state,
                                         dtm_phase_function f, void* user, double tau, int max_steps,
                                         const dtm_quadrature_options* options, double* out);

typedef struct dtm_moment_row {
  int n;
  int i; /* -1 for whole-system rows */
  int j;
  const char* name; /* valid while the report lives */
  double value;
} dtm_moment_row;

DTM_API size_t dtm_moment_report_dof(const dtm_moment_report* report);
DTM_API size_t dtm_moment_report_row_count(const dtm_moment_report* report);
DTM_API dtm_status dtm_moment_report_row(const dtm_moment_report* report, size_t index, dtm_moment_row* out);
/* Names: mean_x, mean_p, mean_x2, mean_p2, var_x, var_p, mean_xx, cov_xx, energy. */
DTM_API dtm_status dtm_moment_report_value(const dtm_moment_report* report, int n, const char* name, int i,
                                           int j, double* out);
DTM_API dtm_status dtm_moment_report_zero_amplitude(const dtm_moment_report* report, size_t i, int* out);
DTM_API void dtm_moment_report_free(dtm_moment_report* report);

/* ---- quantum ----------------------------------------------------------- */

typedef struct dtm_constants {
  double hbar;
  double tau;
} dtm_constants;

DTM_API dtm_constants dtm_constants_natural(void);
DTM_API dtm_constants dtm_constants_si_planck(void);

typedef struct dtm_density_matrix dtm_density_matrix;

/* Row-major d x d real and imaginary parts. With project != 0 the input is replaced by the
 * nearest valid state and *projected (may be NULL) reports whether that changed it. */
DTM_API dtm_status dtm_density_matrix_create(size_t d, const double* energies, const double* re,
                                             const double* im, int project, int* projected,
                                             dtm_density_matrix** out);
DTM_API size_t dtm_density_matrix_dim(const dtm_density_matrix* dm);
DTM_API dtm_status dtm_density_matrix_energies(const dtm_density_matrix* dm, double* out);
DTM_API dtm_status dtm_density_matrix_coeffs(const dtm_density_matrix* dm, double* re, double* im);
DTM_API dtm_status dtm_density_matrix_trace(const dtm_density_matrix* dm, double* out);
DTM_API dtm_status dtm_density_matrix_purity(const dtm_density_matrix* dm, double* out);
DTM_API dtm_status dtm_density_matrix_min_eigenvalue(const dtm_density_matrix* dm, double* out);
DTM_API dtm_status dtm_density_matrix_hermiticity_error(const dtm_density_matrix* dm, double* out);
DTM_API void dtm_density_matrix_free(dtm_density_matrix* dm);

DTM_API dtm_status dtm_evolve_density(const dtm_density_matrix* dm, int n, const dtm_constants* constants,
                                      dtm_density_matrix** out);
DTM_API dtm_status dtm_evolution_factor(int n, double delta_e, const dtm_constants* constants, double* re,
                                        double* im);
DTM_API dtm_status dtm_decoherence_time(double delta_e, const dtm_constants* constants, double* out);
DTM_API dtm_status dtm_offdiagonal_modulus(int n, double delta_e, const dtm_constants* constants, double* out);
DTM_API dtm_status dtm_schroedinger_defect(int n, double delta_e, const dtm_constants* constants, double* out);
/* Row-major d x d multiplier. */
DTM_API dtm_status dtm_schur_multiplier(size_t d, const double* energies, int n, const dtm_constants* constants,
                                        double* re, double* im);
DTM_API dtm_status dtm_gamma_equivalence_check(const dtm_density_matrix* dm, int n,
                                               const dtm_constants* constants,
                                               const dtm_quadrature_options* options, double* max_deviation,
                                               double* max_error_estimate);

/* ---- nonlinear --------------------------------------------------------- */

typedef struct dtm_sensitivity_model {
  double a;
  double b; /* arccos a */
  double c;
} dtm_sensitivity_model;

DTM_API dtm_status dtm_sensitivity_model_make(double a, double c, dtm_sensitivity_model* out);
DTM_API dtm_status dtm_distance_bound(const dtm_sensitivity_model* model, double tau, double* out);
DTM_API dtm_status dtm_ct_position(const dtm_sensitivity_model* model, double t, double* out);
DTM_API dtm_status dtm_ct_distance(const dtm_sensitivity_model* model, double t, double* out);
/* log_distance stays finite when the distance underflows; either pointer may be NULL. */
DTM_API dtm_status dtm_dt_distance(const dtm_sensitivity_model* model, int n, double tau, double* distance,
                                   double* log_distance);

typedef struct dtm_lyapunov_estimate {
  double exponent;
  double intercept;
  double window_lo;
  double window_hi;
  double residual;
  size_t points;       /* sampled points (fitted or not) */
  size_t first_fitted; /* index of the first fitted point */
} dtm_lyapunov_estimate;

/* abscissa/log_distance may be NULL; otherwise they receive `samples` values. */
DTM_API dtm_status dtm_ct_lyapunov(const dtm_sensitivity_model* model, double t_max, int samples,
                                   double max_residual, dtm_lyapunov_estimate* out, double* abscissa,
                                   double* log_distance);
/* Buffers receive n_max values for n = 1..n_max. */
DTM_API dtm_status dtm_dt_lyapunov(const dtm_sensitivity_model* model, double tau, int n_max,
                                   double max_residual, dtm_lyapunov_estimate* out, double* abscissa,
                                   double* log_distance);
DTM_API dtm_status dtm_power_law_value(double alpha, int n, double tau, double* out);
DTM_API dtm_status dtm_exponential_map(double rate, double tau, double* out);

#ifdef __cplusplus
}
#endif

#endif /* DTM_DTM_H */
