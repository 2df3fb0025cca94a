/*
 * radboltz -- spectral solver for the radially symmetric, spatially
 * homogeneous non-cutoff Boltzmann equation with Maxwellian molecules.
 *
 * C interface to the shared library.  All functions return a status code
 * (RBZ_OK on success); rbz_last_error() describes the most recent failure on
 * the calling thread.  Objects are opaque handles released with the matching
 * _destroy function.  Handles are immutable after creation and may be shared
 * across threads.
 */
#ifndef RADBOLTZ_H
#define RADBOLTZ_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rbz_status {
    RBZ_OK = 0,
    RBZ_ERR_INVALID_ARGUMENT = 1,
    RBZ_ERR_CONFIG = 2,
    RBZ_ERR_NUMERICAL = 3,
    RBZ_ERR_VERIFICATION = 4,
    RBZ_ERR_IO = 5
} rbz_status;

const char* rbz_version(void);
const char* rbz_status_name(rbz_status s);
/* Message for the last failure on this thread; never NULL. */
const char* rbz_last_error(void);

/* ------------------------------------------------------------------ model */

typedef struct rbz_model rbz_model;

/* form: "power-law-sine" or "power-law-theta"; 0 < s < 1; amplitude > 0. */
rbz_status rbz_model_create(double s, double amplitude, const char* form, rbz_model** out);
void rbz_model_destroy(rbz_model* m);
rbz_status rbz_model_set_tolerances(rbz_model* m, double abs_tol, double rel_tol,
                                    int max_subdivisions, double grading_exponent);

/* Cross section at a deviation angle in [-pi/4, pi/4] \ {0}. */
rbz_status rbz_beta_eval(const rbz_model* m, double theta, double* out);

/* Angular moments against the cross section (t = sin^2 theta powers). */
rbz_status rbz_angular_moment(const rbz_model* m, int n, int k, double* out);
rbz_status rbz_regularized_moment(const rbz_model* m, int n, double* out);
rbz_status rbz_regularized_cos_moment(const rbz_model* m, int n, double* out);

/* ----------------------------------------------------------------- tables */

typedef struct rbz_tables rbz_tables;

rbz_status rbz_tables_build(const rbz_model* m, int truncation, rbz_tables** out);
void rbz_tables_destroy(rbz_tables* t);
rbz_status rbz_tables_truncation(const rbz_tables* t, int* out);
rbz_status rbz_tables_lambda(const rbz_tables* t, int n, double* out);
rbz_status rbz_tables_alpha(const rbz_tables* t, int n, int m, double* out);
rbz_status rbz_tables_coupling(const rbz_tables* t, int k, int l, double* out);

rbz_status rbz_tables_write_csv(const rbz_tables* t, const char* path);
rbz_status rbz_tables_write_snapshot(const rbz_tables* t, const char* path);
rbz_status rbz_tables_load_snapshot(const char* path, rbz_tables** out);

/* Strict subadditivity of the eigenvalues up to jmax; *violations receives
 * the number of failing pairs (0 when the property holds). */
rbz_status rbz_tables_no_resonance(const rbz_tables* t, int jmax, double* min_margin,
                                   int* violations);
rbz_status rbz_tables_fit_exponent(const rbz_tables* t, int k_min, int k_max, double* s_est,
                                   double* residual);
rbz_status rbz_tables_coupling_bound(const rbz_tables* t, double* c_emp, int* argmax_n,
                                     int* argmax_m);

/* --------------------------------------------------------------- solution */

typedef struct rbz_solution rbz_solution;

/* Closed-form solution of the mode cascade.  b0 must have length
 * truncation + 1 with b0[0] = b0[1] = 0. */
rbz_status rbz_solve_closed_form(const rbz_tables* t, const double* b0, int len,
                                 rbz_solution** out);
void rbz_solution_destroy(rbz_solution* s);
rbz_status rbz_solution_eval(const rbz_solution* s, double t, double* out, int len);
rbz_status rbz_solution_term_count(const rbz_solution* s, int mode, int* out);
/* 1 when every mode carries a closed form, 0 when a near-resonance forced a
 * numeric fallback for some mode. */
rbz_status rbz_solution_closed_form(const rbz_solution* s, int* out);

/* Adaptive numeric trajectory (also valid outside the null-orthogonal
 * subspace).  t_grid must be increasing with t_grid[0] = 0; out receives
 * nt * len values in row-major (time-major) order. */
rbz_status rbz_solve_numeric(const rbz_tables* t, const double* b0, int len,
                             const double* t_grid, int nt, double rel_tol, double abs_tol,
                             double* out);

/* Weighted norms of a coefficient vector: kind 0 = plain l2, 1 = semigroup
 * weight exp(lambda_n * time), 2 = fractional weight (2n+3/2)^{2 s_half},
 * 3 = both combined. */
rbz_status rbz_spectral_norm(const rbz_tables* t, const double* b, int len, int kind,
                             double time, double s_half, double* out);

/* ------------------------------------------------------------------- runs */

/* Orchestrated runs mirroring the command-line subcommands.  config_path may
 * be NULL or empty for defaults; options are applied as "key=value" config
 * overrides. */
typedef struct rbz_run rbz_run;

rbz_status rbz_run_create(const char* config_path, rbz_run** out);
void rbz_run_destroy(rbz_run* r);
rbz_status rbz_run_set(rbz_run* r, const char* key, const char* value);
rbz_status rbz_run_spectrum(rbz_run* r, const char* out_dir);
rbz_status rbz_run_solve(rbz_run* r, const char* out_dir);
/* strict != 0 turns verification failures into RBZ_ERR_VERIFICATION.
 * tables_snapshot may be NULL; then the full suite runs on fresh tables. */
rbz_status rbz_run_verify(rbz_run* r, const char* out_dir, int strict,
                          const char* tables_snapshot, int* failures);
/* Writes a human-readable summary of a previous run directory into buf
 * (NUL-terminated, truncated to buf_len). */
rbz_status rbz_run_report(const char* run_dir, char* buf, size_t buf_len);

/* Captured log of the last rbz_run_* call on this handle. */
const char* rbz_run_log(const rbz_run* r);

#ifdef __cplusplus
}
#endif

#endif /* RADBOLTZ_H */
