/*
 * skewlap C API: skew-symmetric posterior approximations behind opaque
 * handles and status codes.
 *
 * Conventions:
 *   - every fallible call returns skewlap_status; SKEWLAP_OK is zero;
 *   - on failure, skewlap_last_error() / skewlap_last_error_json() describe
 *     the most recent error on the calling thread;
 *   - objects returned through out-parameters are owned by the caller and
 *     released with the matching *_free function;
 *   - matrices cross the boundary as dense row-major double arrays;
 *   - index sets are 1-based, matching the CLI and file formats.
 */
#ifndef SKEWLAP_H
#define SKEWLAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SKEWLAP_API __declspec(dllexport)
#else
#define SKEWLAP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum skewlap_status {
    SKEWLAP_OK = 0,
    SKEWLAP_ERR_DOMAIN = 1,
    SKEWLAP_ERR_INDEFINITE_HESSIAN = 2,
    SKEWLAP_ERR_INDEFINITE_PRECISION = 3,
    SKEWLAP_ERR_UNSUPPORTED_ORDER = 4,
    SKEWLAP_ERR_UNSUPPORTED_MODEL = 5,
    SKEWLAP_ERR_BAD_INDEX_SET = 6,
    SKEWLAP_ERR_NON_FINITE = 7,
    SKEWLAP_ERR_RESOLUTION = 8,
    SKEWLAP_ERR_METRIC_MISSING = 9,
    SKEWLAP_ERR_EMPTY_REFERENCE = 10,
    SKEWLAP_ERR_CONFIG = 11,
    SKEWLAP_ERR_IO = 12,
    SKEWLAP_ERR_NULL_ARGUMENT = 13,
    SKEWLAP_ERR_INTERNAL = 14
} skewlap_status;

SKEWLAP_API const char* skewlap_version(void);
SKEWLAP_API const char* skewlap_status_name(skewlap_status status);

/* Thread-local description of the last failure. */
SKEWLAP_API const char* skewlap_last_error(void);
/* Same, as a {"code": ..., "message": ...} JSON document. */
SKEWLAP_API const char* skewlap_last_error_json(void);

typedef struct skewlap_dataset_s skewlap_dataset;
typedef struct skewlap_model_s skewlap_model;
typedef struct skewlap_map_s skewlap_map;
typedef struct skewlap_approx_s skewlap_approx;
typedef struct skewlap_marginal_s skewlap_marginal;

/* ---- data ---------------------------------------------------------- */

/* covariates may be NULL (p = 0); otherwise row-major n x p. */
SKEWLAP_API skewlap_status skewlap_dataset_create(const double* responses, size_t n,
                                                  const double* covariates, size_t p,
                                                  skewlap_dataset** out);
SKEWLAP_API skewlap_status skewlap_dataset_from_csv(const char* path,
                                                    const char* response_column,
                                                    int add_intercept, skewlap_dataset** out);
SKEWLAP_API void skewlap_dataset_free(skewlap_dataset* dataset);
SKEWLAP_API size_t skewlap_dataset_n(const skewlap_dataset* dataset);
SKEWLAP_API size_t skewlap_dataset_ncov(const skewlap_dataset* dataset);

/* ---- models -------------------------------------------------------- */

/*
 * kind: "exponential_expprior"  (dim 1, params: {prior_rate})
 *       "gamma_poisson"         (dim 1, params: {alpha, beta})
 *       "probit_gaussian"       (dim = covariate count, params: {prior_variance})
 *       "logit_gaussian"        (dim = covariate count, params: {prior_variance})
 */
SKEWLAP_API skewlap_status skewlap_model_create(const char* kind, int dim,
                                                const double* prior_params, size_t n_params,
                                                skewlap_model** out);
SKEWLAP_API void skewlap_model_free(skewlap_model* model);
SKEWLAP_API int skewlap_model_dim(const skewlap_model* model);

SKEWLAP_API skewlap_status skewlap_log_posterior_kernel(const skewlap_model* model,
                                                        const skewlap_dataset* dataset,
                                                        const double* theta, double* out);

/* ---- MAP ----------------------------------------------------------- */

/* init may be NULL for the model default; tol <= 0 selects the default. */
SKEWLAP_API skewlap_status skewlap_find_map(const skewlap_model* model,
                                            const skewlap_dataset* dataset, const double* init,
                                            double tol, int max_iter, skewlap_map** out);
SKEWLAP_API void skewlap_map_free(skewlap_map* map);
SKEWLAP_API skewlap_status skewlap_map_theta(const skewlap_map* map, double* out);
SKEWLAP_API skewlap_status skewlap_map_observed_info(const skewlap_map* map, double* out);
SKEWLAP_API double skewlap_map_grad_norm(const skewlap_map* map);
SKEWLAP_API int skewlap_map_iterations(const skewlap_map* map);
SKEWLAP_API int skewlap_map_converged(const skewlap_map* map);

/* ---- approximations ------------------------------------------------- */

/* skewing: "probit_cdf" | "inverse_logit"; parametrization: "theta" | "h". */
SKEWLAP_API skewlap_status skewlap_build_skew_modal(const skewlap_model* model,
                                                    const skewlap_dataset* dataset,
                                                    const skewlap_map* map, const char* skewing,
                                                    const char* parametrization,
                                                    skewlap_approx** out);
SKEWLAP_API skewlap_status skewlap_build_gaussian_laplace(const skewlap_map* map,
                                                          const char* parametrization,
                                                          skewlap_approx** out);
SKEWLAP_API skewlap_status skewlap_build_theoretical_sks(const skewlap_model* model,
                                                         const skewlap_dataset* dataset,
                                                         const double* theta_star,
                                                         const char* skewing,
                                                         skewlap_approx** out);
SKEWLAP_API skewlap_status skewlap_build_marginal(const skewlap_model* model,
                                                  const skewlap_dataset* dataset,
                                                  const skewlap_map* map,
                                                  const int* indices_1based, size_t n_indices,
                                                  const char* skewing,
                                                  const char* parametrization,
                                                  skewlap_marginal** out);
SKEWLAP_API void skewlap_approx_free(skewlap_approx* approx);
SKEWLAP_API void skewlap_marginal_free(skewlap_marginal* marginal);

SKEWLAP_API int skewlap_approx_dim(const skewlap_approx* approx);
SKEWLAP_API int skewlap_marginal_dim(const skewlap_marginal* marginal);

SKEWLAP_API skewlap_status skewlap_approx_log_density(const skewlap_approx* approx,
                                                      const double* point, double* out);
SKEWLAP_API skewlap_status skewlap_marginal_log_density(const skewlap_marginal* marginal,
                                                        const double* point, double* out);

/* out holds n_draws * dim doubles, one draw per row. */
SKEWLAP_API skewlap_status skewlap_approx_sample(const skewlap_approx* approx, size_t n_draws,
                                                 uint64_t seed, double* out);
SKEWLAP_API skewlap_status skewlap_marginal_sample(const skewlap_marginal* marginal,
                                                   size_t n_draws, uint64_t seed, double* out);

/* Serialized documents; release strings with skewlap_string_free. */
SKEWLAP_API skewlap_status skewlap_approx_to_json(const skewlap_approx* approx, char** out);
SKEWLAP_API skewlap_status skewlap_approx_from_json(const char* json, skewlap_approx** out);
SKEWLAP_API skewlap_status skewlap_marginal_to_json(const skewlap_marginal* marginal, char** out);
SKEWLAP_API skewlap_status skewlap_marginal_from_json(const char* json, skewlap_marginal** out);
SKEWLAP_API void skewlap_string_free(char* s);

/* ---- config-driven commands ----------------------------------------- */

typedef struct skewlap_overrides {
    int has_seed;
    uint64_t seed;
    int has_jobs;
    int jobs;
    int has_n_draws;
    long long n_draws;
    const char* out; /* NULL keeps the config value */
} skewlap_overrides;

/*
 * command: "approx" | "sample" | "marginal" | "diagnose" | "bench".
 * config_json is the full command configuration document; overrides may be
 * NULL. On success *stdout_lines holds newline-separated JSON documents.
 */
SKEWLAP_API skewlap_status skewlap_run_command(const char* command, const char* config_json,
                                               const skewlap_overrides* overrides,
                                               char** stdout_lines);

#ifdef __cplusplus
}
#endif

#endif /* SKEWLAP_H */
