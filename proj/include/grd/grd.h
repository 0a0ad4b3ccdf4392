/*
 * C API for the rank-Dirichlet library: validation, densities, moments,
 * log-gap laws, samplers, and the numerical-oracle utilities, behind opaque
 * handles with status-code error reporting.
 *
 * Conventions:
 *   - Every fallible function returns grd_status; GRD_OK is 0.
 *   - On failure, grd_last_error_message() / grd_last_error_index() describe
 *     the error for the calling thread until its next failing call.
 *   - Output buffers are caller-allocated at the documented sizes.
 *   - Handles are created by *_create functions and released by the matching
 *     *_destroy; destroying NULL is a no-op.
 */
#ifndef GRD_GRD_H
#define GRD_GRD_H

#include <stddef.h>

#if defined(_WIN32)
#define GRD_API __declspec(dllexport)
#else
#define GRD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Stable status codes; names are available via grd_status_name. */
typedef enum grd_status {
    GRD_OK = 0,
    GRD_DIMENSION_TOO_SMALL,
    GRD_NONFINITE_INPUT,
    GRD_TAIL_SUM_VIOLATION,
    GRD_NOT_ZERO_SUM,
    GRD_NOT_NEGATIVE_INTEGER_SUM,
    GRD_NOT_IN_ORDERED_SIMPLEX,
    GRD_BAD_MOMENT_ORDER,
    GRD_MOMENT_ORDER_TOO_HIGH,
    GRD_MGF_DOMAIN_VIOLATION,
    GRD_CAP_EXCEEDED,
    GRD_MISMATCHED_TOTAL,
    GRD_TIED_OR_ZERO_WEIGHTS,
    GRD_NEGATIVE_TRUNCATED_WEIGHT,
    GRD_NON_CONVERGED,
    GRD_UNSUPPORTED_DIMENSION,
    GRD_TOLERANCE_NOT_REACHED,
    GRD_EMPTY_INPUT,
    GRD_TOO_FEW_SAMPLES,
    GRD_METHOD_CASE_MISMATCH,
    GRD_INVALID_ARGUMENT
} grd_status;

/* Closed-form regime of a parameter vector, classified by its total sum. */
typedef enum grd_case {
    GRD_CASE_ZERO_SUM = 0,
    GRD_CASE_NEGATIVE_INTEGER = 1,
    GRD_CASE_GENERAL = 2
} grd_case;

/* Random-variate generation strategies. */
typedef enum grd_method {
    GRD_METHOD_ZERO_SUM = 0,
    GRD_METHOD_EXACT = 1,
    GRD_METHOD_APPROX = 2,
    GRD_METHOD_REJECTION = 3
} grd_method;

typedef struct grd_params grd_params;
typedef struct grd_rng grd_rng;
typedef struct grd_sampler grd_sampler;
typedef struct grd_table grd_table;

/* ------------------------------------------------------------------ */
/* Library metadata and error reporting                                */
/* ------------------------------------------------------------------ */

GRD_API const char* grd_version(void);

/* Stable snake_case name of a status code ("tail_sum_violation", ...). */
GRD_API const char* grd_status_name(grd_status code);

/* Message / 1-based offending index (-1 if n/a) of the calling thread's most
 * recent failing call. The pointer stays valid until that thread fails again. */
GRD_API const char* grd_last_error_message(void);
GRD_API int grd_last_error_index(void);

/* Frees strings returned by functions documented as malloc'd (grd_check_report). */
GRD_API void grd_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Parameter vectors                                                   */
/* ------------------------------------------------------------------ */

/* Validation outcome; `valid` is 1/0, `offending_k` is the 1-based tail index
 * for GRD_TAIL_SUM_VIOLATION and -1 otherwise. `order` is M >= 0 when the sum
 * is zero or a negative integer; `power` is r = -sum(a) in every case. */
typedef struct grd_validation {
    int valid;
    grd_status code;
    int offending_k;
    grd_case kind;
    int order;
    double power;
} grd_validation;

/* Never fails on inadmissible vectors: the outcome lands in *out. Returns
 * non-OK only for NULL pointers or d < 1. */
GRD_API grd_status grd_validate(const double* a, int d, grd_validation* out);

/* Tail sums out[k-1] = a_k + ... + a_d for k = 1..d (out has size d). */
GRD_API grd_status grd_tail_sums(const double* a, int d, double* out);

/* Creates a validated parameter handle (fails with the validation error). */
GRD_API grd_status grd_params_create(const double* a, int d, grd_params** out);
GRD_API void grd_params_destroy(grd_params* p);

GRD_API int grd_params_dim(const grd_params* p);
GRD_API grd_status grd_params_a(const grd_params* p, double* out /* size d */);
GRD_API grd_status grd_params_tails(const grd_params* p, double* out /* size d */);
GRD_API grd_status grd_params_case(const grd_params* p, grd_case* kind, int* order,
                                   double* power);

/* log of the unnormalized density at y (size d); boundary conventions: a zero
 * coordinate contributes 0 / +inf / -inf for a_k == 1 / < 1 / > 1, and mixed
 * infinities yield NaN. */
GRD_API grd_status grd_log_density(const grd_params* p, const double* y, int d, double* out);

/* Normalizing constant prod 1/a-bar_k of the zero-sum case. */
GRD_API grd_status grd_norm_const_zero_sum(const grd_params* p, double* out);

/* ------------------------------------------------------------------ */
/* Moments and calibration                                             */
/* ------------------------------------------------------------------ */

/* E[prod Y_k^{n_k} / Y_1^M] for zero-sum parameters (n has size d, M >= sum n). */
GRD_API grd_status grd_ratio_moment_zero_sum(const grd_params* p, const int* n, int d, int M,
                                             double* out);

/* E[Y_1^{-M}] for zero-sum parameters. */
GRD_API grd_status grd_negative_moment_y1(const grd_params* p, int M, double* out);

/* E[prod Y_k^{n_k}] when sum(a) == -M (n has size d, sum n <= M). */
GRD_API grd_status grd_positive_moments(const grd_params* p, const int* n, int d, double* out);

/* First-moment vector E[Y] when sum(a) == -1 (out has size d). */
GRD_API grd_status grd_mean_vector(const grd_params* p, double* out);

/* Unique parameter vector with sum(a) == -1 whose mean vector is y (y strictly
 * decreasing, positive, summing to 1). */
GRD_API grd_status grd_calibrate_first_moment(const double* y, int d, grd_params** out);

/* ------------------------------------------------------------------ */
/* Log-gap laws (Z_k = log Y_{k-1} - log Y_k, k = 2..d)                */
/* ------------------------------------------------------------------ */

/* Zero-sum case: exponential rates (a-bar_2, ..., a-bar_d); out has size d-1. */
GRD_API grd_status grd_loggap_rates_zero_sum(const grd_params* p, double* out);

/* Joint MGF E[exp(sum t_k Z_k)] when sum(a) == -M; t has size d-1 and must
 * satisfy t_k < a-bar_k. */
GRD_API grd_status grd_loggap_mgf(const grd_params* p, const double* t, int len, double* out);

/* Joint moments E[prod Z_k^{n_k}] when sum(a) == -M; n has size d-1. */
GRD_API grd_status grd_loggap_moments(const grd_params* p, const int* n, int len, double* out);

/* ------------------------------------------------------------------ */
/* Series evaluation (general sum, r = -sum(a) not a nonnegative integer) */
/* ------------------------------------------------------------------ */

typedef struct grd_series_diag {
    int terms_used;
    int converged; /* 1/0; when 0 the returned value is the partial sum */
    double final_increment;
} grd_series_diag;

/* E[Y_1^{-r}] for ZERO-SUM p and arbitrary real r, by the alternating series
 * with extended-precision accumulation. tol <= 0 or max_k <= 0 pick defaults
 * (1e-10, 60). diag may be NULL. */
GRD_API grd_status grd_expected_power_y1_series(const grd_params* p, double r, double tol,
                                                int max_k, double* out, grd_series_diag* diag);

/* E[prod Z_k^{n_k}] for general-sum parameters via the order-K truncated
 * series (n has size d-1). */
GRD_API grd_status grd_loggap_moments_series(const grd_params* p, const int* n, int len, int K,
                                             double tol, int max_k, double* out,
                                             grd_series_diag* diag);

/* ------------------------------------------------------------------ */
/* Mixing tables                                                       */
/* ------------------------------------------------------------------ */

/* Exact finite mixing table over compositions of M when sum(a) == -M.
 * cap == 0 uses the default enumeration cap. */
GRD_API grd_status grd_table_exact(const grd_params* p, size_t cap, grd_table** out);

/* Truncated signed table at order K for general-sum parameters (negative
 * weights clipped; see grd_table_diag). */
GRD_API grd_status grd_table_truncated(const grd_params* p, int K, size_t cap, grd_table** out);

GRD_API void grd_table_destroy(grd_table* t);
GRD_API long long grd_table_size(const grd_table* t);
GRD_API int grd_table_dim(const grd_table* t);

/* Entry i: composition into m_out (size d) and normalized weight. */
GRD_API grd_status grd_table_entry(const grd_table* t, long long i, int* m_out,
                                   double* weight_out);

/* Total clipped negative mass and how many entries were clipped. */
GRD_API grd_status grd_table_diag(const grd_table* t, double* clipped_mass,
                                  long long* clipped_count);

/* ------------------------------------------------------------------ */
/* Random-variate generation                                           */
/* ------------------------------------------------------------------ */

GRD_API grd_status grd_rng_create(unsigned long long seed, grd_rng** out);
GRD_API void grd_rng_destroy(grd_rng* r);
GRD_API grd_status grd_rng_uniform(grd_rng* r, double* out);
GRD_API grd_status grd_rng_exponential(grd_rng* r, double rate, double* out);

typedef struct grd_sampler_stats {
    long long draws;
    long long proposals; /* rejection method only; == draws otherwise */
    long long accepted;
    double acceptance_rate;
    double clipped_mass; /* approximate method only; 0 otherwise */
    long long table_size; /* table-driven methods; 0 otherwise */
} grd_sampler_stats;

/* truncation is the series order K (approximate method only; pass 0 when
 * unused); cap == 0 uses the default enumeration cap. */
GRD_API grd_status grd_sampler_create(const grd_params* p, grd_method method, int truncation,
                                      size_t cap, grd_sampler** out);
GRD_API void grd_sampler_destroy(grd_sampler* s);

/* One draw into y_out (size d). */
GRD_API grd_status grd_sampler_draw(grd_sampler* s, grd_rng* r, double* y_out);

/* n draws, column-major: out[k*n + i] is coordinate k+1 of draw i (size d*n). */
GRD_API grd_status grd_sampler_draw_batch(grd_sampler* s, grd_rng* r, long long n, double* out);

GRD_API grd_status grd_sampler_get_stats(const grd_sampler* s, grd_sampler_stats* out);

/* ------------------------------------------------------------------ */
/* Numerical oracle                                                    */
/* ------------------------------------------------------------------ */

/* Direct integration of the unnormalized density over the ordered simplex
 * (d in {2, 3}). Divergent (inadmissible) parameters fail with
 * GRD_TOLERANCE_NOT_REACHED. */
GRD_API grd_status grd_quadrature_norm_const(const double* a, int d, double tol, double* value,
                                             double* error);

/* Normalized expectation of
 *   prod y_k^{y_powers[k]} * y_1^{-y1_negative_order + y1_power_real}
 *   * prod (log(y_{k-1}/y_k))^{z_powers[k-2]}.
 * y_powers (size d) and z_powers (size d-1) may be NULL for all-zero. */
GRD_API grd_status grd_quadrature_moment(const double* a, int d, const int* y_powers,
                                         int y1_negative_order, double y1_power_real,
                                         const int* z_powers, double tol, double* value,
                                         double* error);

/* Sample mean and standard error (n >= 2). */
GRD_API grd_status grd_mc_estimate(const double* xs, long long n, double* mean, double* se);

/* Asymptotic Kolmogorov-Smirnov critical value c(alpha) with
 * P(sup|B| > c) = alpha. */
GRD_API grd_status grd_kolmogorov_critical(double alpha, double* out);

typedef struct grd_ks_result {
    double statistic;
    double critical;
    int reject;
    long long n;
    long long m; /* two-sample only; 0 otherwise */
} grd_ks_result;

typedef double (*grd_cdf_fn)(double x, void* ctx);

/* One-sample KS test of xs against a continuous CDF callback. */
GRD_API grd_status grd_ks_test(const double* xs, long long n, grd_cdf_fn cdf, void* ctx,
                               double alpha, grd_ks_result* out);

/* Two-sample KS test. */
GRD_API grd_status grd_ks_test_two_sample(const double* xs, long long n, const double* ys,
                                          long long m, double alpha, grd_ks_result* out);

/* Runs the formula-vs-oracle check suite; *json_out receives a malloc'd JSON
 * report (free with grd_string_free). quick != 0 shrinks the grids. */
GRD_API grd_status grd_check_report(int quick, char** json_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GRD_GRD_H */
