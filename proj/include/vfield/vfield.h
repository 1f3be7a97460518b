#ifndef VFIELD_VFIELD_H
#define VFIELD_VFIELD_H

/*
 * C interface to the velocity-field toolkit.
 *
 * Objects are opaque handles released with the matching *_destroy call.
 * Every fallible call returns a vf_status; on failure vf_last_error()
 * describes the problem (thread-local, valid until the next failing call).
 * Events are (x1, x2, x3, t); four-vectors use x4 = i c t.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(VFIELD_BUILDING_LIBRARY)
#define VF_API __attribute__((visibility("default")))
#else
#define VF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vf_status {
  VF_OK = 0,
  VF_INVALID_ARGUMENT = 1,
  VF_INVALID_BOOST = 2,
  VF_SINGULAR_POINT = 3,
  VF_NEAR_ZERO_WAVEFUNCTION = 4,
  VF_INSUFFICIENT_COMPONENTS = 5,
  VF_UNSUPPORTED_CONFIGURATION = 6,
  VF_QUADRATURE_FAILURE = 7,
  VF_DEGENERATE_PARAMETER = 8,
  VF_UNKNOWN_REPRESENTATION = 9,
  VF_CONFIG_ERROR = 10,
  VF_IO_ERROR = 11,
  VF_UNKNOWN_SCENARIO = 12,
  VF_BUFFER_TOO_SMALL = 13,
  VF_INTERNAL_ERROR = 99
} vf_status;

typedef struct vf_complex {
  double re;
  double im;
} vf_complex;

typedef struct vf_event {
  double x1, x2, x3, t;
} vf_event;

typedef struct vf_constants {
  double hbar, c, m, q;
} vf_constants;

typedef enum vf_derivative_mode { VF_ANALYTIC = 0, VF_NUMERIC = 1 } vf_derivative_mode;

typedef struct vf_context {
  vf_constants constants;
  vf_derivative_mode mode;
  double h;        /* finite-difference step, numeric mode only */
  int richardson;  /* nonzero: Richardson-extrapolate the stencils */
  double psi_floor;
} vf_context;

typedef enum vf_spin { VF_SPIN_UP = 0, VF_SPIN_DOWN = 1 } vf_spin;
typedef enum vf_dirac_form { VF_FORM_GAMMA = 0, VF_FORM_ALPHA_BETA = 1 } vf_dirac_form;
typedef enum vf_speed_class { VF_TIMELIKE = 0, VF_NULL = 1, VF_SPACELIKE = 2 } vf_speed_class;
typedef enum vf_format { VF_FORMAT_DEFAULT = -1, VF_FORMAT_JSON = 0, VF_FORMAT_CSV = 1 } vf_format;

typedef struct vf_potential vf_potential;
typedef struct vf_scalar_wave vf_scalar_wave;
typedef struct vf_spinor_wave vf_spinor_wave;
typedef struct vf_worldline vf_worldline;
typedef struct vf_report vf_report;

VF_API const char* vf_version(void);
VF_API const char* vf_last_error(void);
VF_API const char* vf_status_name(vf_status s);

/* hbar = c = m = 1, q = -1; analytic derivatives, h = 1e-3, floor 1e-12. */
VF_API vf_constants vf_default_constants(void);
VF_API vf_context vf_default_context(void);

/* Potentials. */
VF_API vf_status vf_potential_zero(vf_potential** out);
VF_API vf_status vf_potential_coulomb(double z_alpha, const vf_constants* k, vf_potential** out);
VF_API vf_status vf_potential_value(const vf_potential* a, vf_event e, vf_complex out[4]);
/* Row-major F[mu][nu]. */
VF_API vf_status vf_field_strength(const vf_potential* a, vf_event e, const vf_context* ctx,
                                   vf_complex out[16]);
VF_API void vf_potential_destroy(vf_potential* a);

/* Scalar wavefunctions. */
VF_API vf_status vf_scalar_plane_wave(const double p[3], const vf_constants* k,
                                      vf_scalar_wave** out);
VF_API vf_status vf_scalar_kg_coulomb_1s(double z_alpha, const vf_constants* k,
                                         vf_scalar_wave** out);
/* Same state with its time phase driven by `energy`. */
VF_API vf_status vf_scalar_kg_coulomb_1s_detuned(double z_alpha, double energy,
                                                 const vf_constants* k, vf_scalar_wave** out);
VF_API vf_status vf_scalar_value(const vf_scalar_wave* w, vf_event e, vf_complex* out);
VF_API double vf_scalar_energy(const vf_scalar_wave* w);
/* Gauge transform by the real polynomial chi = sum_i coef[i] x^exps[4i..4i+3],
 * exponents over (x1, x2, x3, t). Produces a new pair (A', psi'). */
VF_API vf_status vf_gauge_transform_polynomial(const vf_potential* a, const vf_scalar_wave* w,
                                               size_t n_terms, const double* coefs,
                                               const int* exps, const vf_constants* k,
                                               vf_potential** a_out, vf_scalar_wave** w_out);
VF_API void vf_scalar_destroy(vf_scalar_wave* w);

/* Velocity-field residuals. */
VF_API vf_status vf_extract_u(const vf_scalar_wave* w, const vf_potential* a, vf_event e,
                              const vf_context* ctx, vf_complex out[4]);
VF_API vf_status vf_mass_shell_residual(const vf_scalar_wave* w, const vf_potential* a,
                                        vf_event e, const vf_context* ctx, vf_complex* out);
/* Normalized by |u|. */
VF_API vf_status vf_newton_residual(const vf_scalar_wave* w, const vf_potential* a, vf_event e,
                                    const vf_context* ctx, vf_complex out[4]);
VF_API vf_status vf_curl_k(const vf_scalar_wave* w, const vf_potential* a, vf_event e,
                           const vf_context* ctx, vf_complex out[16]);
/* d_mu(m u_mu) evaluated from u and from the log-Laplacian. */
VF_API vf_status vf_divergence(const vf_scalar_wave* w, const vf_potential* a, vf_event e,
                               const vf_context* ctx, vf_complex* from_velocity,
                               vf_complex* from_log_laplacian);
VF_API vf_status vf_kg_residual(const vf_scalar_wave* w, const vf_potential* a, vf_event e,
                                const vf_context* ctx, vf_complex* out);
VF_API vf_status vf_nonlinear_residual(const vf_scalar_wave* w, const vf_potential* a,
                                       vf_event e, const vf_context* ctx, vf_complex* out);
VF_API vf_status vf_action_integral(const vf_scalar_wave* w, const vf_potential* a,
                                    const vf_event* path, size_t n, const vf_context* ctx,
                                    vf_complex* phi, double* reconstruction_error);

/* Spinors. */
VF_API vf_status vf_spinor_dirac_plane_wave(const double p[3], vf_spin spin,
                                            const vf_constants* k, vf_spinor_wave** out);
VF_API vf_status vf_spinor_dirac_coulomb_1s(double z_alpha, vf_spin spin, const vf_constants* k,
                                            vf_spinor_wave** out);
VF_API vf_status vf_spinor_value(const vf_spinor_wave* w, vf_event e, vf_complex out[4]);
VF_API double vf_spinor_energy(const vf_spinor_wave* w);
VF_API vf_status vf_dirac_residual(const vf_spinor_wave* w, const vf_potential* a, vf_event e,
                                   const vf_context* ctx, vf_dirac_form form, vf_complex out[4]);
VF_API vf_status vf_spinor_velocity_consistency(const vf_spinor_wave* w, const vf_potential* a,
                                                vf_event e, const vf_context* ctx,
                                                double* max_deviation);
VF_API void vf_spinor_destroy(vf_spinor_wave* w);

/* Gamma matrices (Dirac-standard), row-major; mu in 0..3. */
VF_API vf_status vf_gamma_matrix(int mu, vf_complex out[16]);
VF_API double vf_clifford_residual(void);
VF_API vf_status vf_factorization_residual(const vf_complex p[4], const vf_constants* k,
                                           double* out);

/* Worldlines. */
VF_API vf_status vf_worldline_line(vf_event origin, const double velocity[3], double lambda_min,
                                   double lambda_max, double c, vf_worldline** out);
VF_API vf_status vf_worldline_helix(double radius, double omega, double lambda_min,
                                    double lambda_max, double c, vf_worldline** out);
VF_API vf_status vf_worldline_circle(double radius, double c, vf_worldline** out);
VF_API vf_status vf_worldline_boost(const vf_worldline* w, double v, vf_worldline** out);
VF_API vf_status vf_worldline_position(const vf_worldline* w, double lambda, vf_event* out);
VF_API vf_status vf_worldline_speed_class(const vf_worldline* w, double lambda,
                                          vf_speed_class* out);
VF_API void vf_worldline_destroy(vf_worldline* w);

typedef struct vf_pierce {
  double lambda;
  vf_event event;
  vf_speed_class speed;
  int tangent;      /* nonzero for touching roots */
  int has_u;        /* u is filled for timelike points */
  vf_complex u[4];
} vf_pierce;

/* Writes up to `cap` points; *count receives the total found. Returns
 * VF_BUFFER_TOO_SMALL (after filling `cap`) when the buffer is short. */
VF_API vf_status vf_pierce_points(const vf_worldline* w, double t0, vf_pierce* out, size_t cap,
                                  size_t* count);

/* Scenarios and reports. */
typedef struct vf_run_options {
  vf_format format;     /* VF_FORMAT_DEFAULT keeps the configured format */
  const char* out_path; /* NULL keeps the configured path */
  double h;             /* <= 0 keeps the configured step */
  int mode;             /* -1 keeps the configured mode, else vf_derivative_mode */
  int has_seed;
  uint64_t seed;
  int no_timestamp;
} vf_run_options;

VF_API vf_run_options vf_default_run_options(void);
VF_API size_t vf_scenario_count(void);
/* NULL when index is out of range. */
VF_API const char* vf_scenario_name(size_t index);
/* `name` or `config_json` may be NULL (not both); when both are given the
 * configured scenario must match `name`. */
VF_API vf_status vf_run_scenario(const char* name, const char* config_json,
                                 const vf_run_options* opts, vf_report** out);
/* 0 when every check passed, 1 otherwise. */
VF_API int vf_report_exit_code(const vf_report* r);
VF_API int vf_report_all_passed(const vf_report* r);
VF_API size_t vf_report_check_count(const vf_report* r);
/* Fills name (borrowed pointer), linf and passed for check `index`. */
VF_API vf_status vf_report_check(const vf_report* r, size_t index, const char** name,
                                 double* linf, int* passed);
/* Configured output path or NULL. */
VF_API const char* vf_report_output_path(const vf_report* r);
/* Serializes into buf (NUL-terminated); *len receives the full length
 * without the terminator. Pass buf = NULL to query the length. */
VF_API vf_status vf_report_render(const vf_report* r, vf_format format, char* buf, size_t cap,
                                  size_t* len);
/* path NULL uses the configured path. */
VF_API vf_status vf_report_write(const vf_report* r, const char* path, vf_format format);
VF_API void vf_report_destroy(vf_report* r);

#ifdef __cplusplus
}
#endif

#endif
