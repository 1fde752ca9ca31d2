/* C interface to the llk library.
 *
 * Every function returns an llk_status. On failure a message is available
 * from llk_last_error() on the calling thread until the next call. Strings
 * returned through char** out-parameters are owned by the caller and released
 * with llk_string_free. Handles are released with their *_destroy function.
 */
#ifndef LLK_LLK_H
#define LLK_LLK_H

#include <stddef.h>
#include <stdint.h>

#if defined(LLK_BUILDING_LIBRARY)
#define LLK_API __attribute__((visibility("default")))
#else
#define LLK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum llk_status {
  LLK_OK = 0,
  LLK_ERR_INVALID_ARGUMENT = 1, /* null pointer, unknown name, bad size */
  LLK_ERR_DOMAIN = 2,           /* value outside a function's domain */
  LLK_ERR_UNSUPPORTED = 3,      /* operation not defined for this kind */
  LLK_ERR_DIVERGENCE = 4,       /* non-finite values while fitting */
  LLK_ERR_DATA = 5,             /* malformed CSV or model file, I/O failure */
  LLK_ERR_INTERNAL = 6
} llk_status;

LLK_API const char* llk_version(void);
LLK_API const char* llk_status_name(llk_status status);
/* Message of the last failed call on this thread; "" after a success. */
LLK_API const char* llk_last_error(void);
LLK_API void llk_string_free(char* s);

/* ---- activations ---- */

typedef struct llk_activation_params {
  double alpha; /* leaky/prelu slope, shifted_relu floor, elu/delu scale */
  double beta;  /* swish/delu */
  double b;     /* squareplus */
  double x_c;   /* delu threshold */
} llk_activation_params;

/* Fills the conventional defaults for `kind` (a name such as "gelu"). */
LLK_API llk_status llk_activation_defaults(const char* kind, llk_activation_params* out);
/* value and/or deriv may be NULL. Asking for the derivative of heaviside
 * returns LLK_ERR_UNSUPPORTED. params == NULL uses the defaults. */
LLK_API llk_status llk_activation_eval(const char* kind, const llk_activation_params* params,
                                       double z, double* value, double* deriv);

/* ---- losses ---- */

typedef struct llk_loss_params {
  double delta, c, nu, sigma, eps, tau, p;
  double gamma; /* focal */
} llk_loss_params;

LLK_API void llk_loss_params_init(llk_loss_params* params);
/* Scalar losses: every regression kind plus bce, bce_from_logits,
 * bipolar_bce, hinge and squared_hinge. value and/or grad may be NULL;
 * grad is d loss / d yhat. */
LLK_API llk_status llk_loss_eval(const char* kind, const llk_loss_params* params, double y,
                                 double yhat, double* value, double* grad);
/* Vector losses over K classes: cce, cce_from_logits, focal, crammer_singer,
 * weston_watkins. grad (K entries) may be NULL. */
LLK_API llk_status llk_loss_eval_vector(const char* kind, const llk_loss_params* params,
                                        size_t target, const double* yhat, size_t k,
                                        double* value, double* grad);
/* Space-separated list of accepted scalar loss names. */
LLK_API const char* llk_loss_names(void);

/* ---- divergences ---- */

LLK_API llk_status llk_divergence(const char* kind, const double* p, const double* q,
                                  size_t k, double* out);
LLK_API llk_status llk_renyi(double alpha, const double* p, const double* q, size_t k,
                             double* out);
LLK_API llk_status llk_wasserstein(double order, const double* p, const double* q, size_t k,
                                   double* out);

/* ---- datasets ---- */

typedef struct llk_dataset llk_dataset;

typedef struct llk_family_spec {
  const char* family; /* gaussian, laplace, bernoulli, bernoulli_bipolar, ... */
  const char* link;   /* NULL selects the family default */
  double tweedie_p;
  double dispersion;
} llk_family_spec;

LLK_API void llk_family_spec_init(llk_family_spec* spec, const char* family);
/* Checks the family name, link and parameters. */
LLK_API llk_status llk_family_check(const llk_family_spec* spec);

/* Loads a numeric CSV. target == NULL selects the last column. classes == 0
 * infers the multinomial class count from the labels. */
LLK_API llk_status llk_dataset_load_csv(const char* path, const char* target,
                                        const llk_family_spec* family, size_t classes,
                                        llk_dataset** out);
LLK_API size_t llk_dataset_rows(const llk_dataset* ds);
LLK_API size_t llk_dataset_features(const llk_dataset* ds);
/* Comma-separated feature column names, owned by the dataset. */
LLK_API const char* llk_dataset_feature_names(const llk_dataset* ds);
LLK_API const char* llk_dataset_target_name(const llk_dataset* ds);
LLK_API void llk_dataset_destroy(llk_dataset* ds);

/* ---- fitting ---- */

typedef struct llk_model llk_model;

typedef struct llk_fit_config {
  double learning_rate;
  long max_iters;
  double grad_tol;
  int backtracking;
  uint64_t seed; /* 0 starts from zero weights */
} llk_fit_config;

typedef struct llk_fit_summary {
  double final_nll;
  long iterations;
  int converged;
  double grad_norm;
  int separation_flag;
  /* grad_tol, precision_floor, max_iters or separation (static string). */
  const char* stop_reason;
} llk_fit_summary;

LLK_API void llk_fit_config_init(llk_fit_config* config);
/* config == NULL uses the defaults; summary may be NULL. */
LLK_API llk_status llk_fit(const llk_family_spec* family, const llk_dataset* data,
                           const llk_fit_config* config, llk_model** model,
                           llk_fit_summary* summary);
/* Per-iteration NLL history of the fit that produced `model` (empty for a
 * loaded model). The array is owned by the model. */
LLK_API llk_status llk_model_history(const llk_model* model, const double** values,
                                     size_t* count);

LLK_API llk_status llk_model_save(const llk_model* model, const char* path);
LLK_API llk_status llk_model_load(const char* path, llk_model** out);
/* Row-major weights, features first and bias last; owned by the model. */
LLK_API llk_status llk_model_weights(const llk_model* model, const double** data,
                                     size_t* rows, size_t* cols);
LLK_API const char* llk_model_family(const llk_model* model);
LLK_API const char* llk_model_link(const llk_model* model);
LLK_API void llk_model_destroy(llk_model* model);

/* Mean of `metric` over the dataset: "nll", "bce", "cce", "bipolar_bce" or a
 * regression loss name applied to the mean-scale prediction. params may be
 * NULL. */
LLK_API llk_status llk_model_evaluate(const llk_model* model, const llk_dataset* data,
                                      const char* metric, const llk_loss_params* params,
                                      double* out);
/* Loads a dataset laid out like the model's training data (same target
 * name, family and class count). */
LLK_API llk_status llk_model_load_dataset(const llk_model* model, const char* path,
                                          llk_dataset** out);

/* ---- sampling ---- */

/* Draws n values from `dist` with named parameters (e.g. {"mu", "sigma"}). */
LLK_API llk_status llk_sample(const char* dist, const char* const* names,
                              const double* values, size_t nparams, size_t n, uint64_t seed,
                              double* out);

/* ---- verification ---- */

/* Runs a suite ("all" for every suite). *json receives the report body
 * {"suites": [...], "summary": {...}}; *all_passed is 1 when every check
 * passed. */
LLK_API llk_status llk_verify_run(const char* suite, uint64_t seed, char** json,
                                  int* all_passed);

/* Re-serializes a JSON document with every floating-point number printed to
 * 17 significant digits and key order preserved. */
LLK_API llk_status llk_report_format(const char* json, char** out);

#ifdef __cplusplus
}
#endif

#endif /* LLK_LLK_H */
