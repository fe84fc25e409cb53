#ifndef GRAPEVINE_H
#define GRAPEVINE_H

/* C interface to the sampler library. All entry points are thread-safe as
 * long as each handle is used from one thread at a time. Functions report
 * problems through gv_status; nothing throws across this boundary. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define GV_API __declspec(dllexport)
#else
#define GV_API __attribute__((visibility("default")))
#endif

typedef enum gv_status {
  GV_OK = 0,
  GV_ERR_BAD_ARG = 1,
  GV_ERR_UNKNOWN_MODEL = 2,
  GV_ERR_UNKNOWN_HEURISTIC = 3,
  GV_ERR_SIMULATION_FAILED = 4,
  GV_ERR_INTERNAL = 5
} gv_status;

GV_API const char* gv_status_string(gv_status s);

/* ---- registry ---- */

GV_API int gv_model_count(void);
GV_API const char* gv_model_name(int index); /* NULL if out of range */
GV_API int gv_model_exists(const char* name);

GV_API int gv_heuristic_count(void);
GV_API const char* gv_heuristic_name(int index);
GV_API int gv_heuristic_exists(const char* name);

/* Dataset stream for a (model, run seed) pair; distinct per model. */
GV_API unsigned long long gv_data_seed(const char* model, unsigned long long run_seed);

/* ---- models ---- */

typedef struct gv_model gv_model;

typedef struct gv_model_options {
  double sigma_theta;  /* prior scale for the test-function family */
  double sigma_y;      /* observation noise scale */
  double solver_tol;   /* <= 0 keeps the per-model default */
  int solver_maxiter;  /* <= 0 keeps the default of 100 */
} gv_model_options;

GV_API void gv_model_options_default(gv_model_options* opts);

/* Simulates a dataset from data_seed and binds it to the target density.
 * opts may be NULL for defaults. */
GV_API gv_status gv_model_create(const char* name, unsigned long long data_seed,
                                 const gv_model_options* opts, gv_model** out);
GV_API void gv_model_destroy(gv_model* m);

GV_API int gv_model_theta_dim(const gv_model* m);
GV_API int gv_model_x_dim(const gv_model* m);

/* The solver settings the model resolved to, defaults included. */
GV_API double gv_model_solver_tol(const gv_model* m);
GV_API int gv_model_solver_maxiter(const gv_model* m);

/* Largest relative error of any analytic derivative callback against finite
 * differences at randomly drawn points. */
GV_API gv_status gv_model_self_test(const gv_model* m, unsigned long long seed,
                                    double* worst_rel_err);

/* ---- sampling ---- */

typedef struct gv_run gv_run;

typedef struct gv_sampler_options {
  int num_warmup;
  int num_samples;
  int max_tree_depth;
  double target_accept;
  double init_step_size;
  unsigned long long seed;
  const char* heuristic; /* "static", "previous", "implicit", "implicit-cg" */
} gv_sampler_options;

GV_API void gv_sampler_options_default(gv_sampler_options* opts);

/* Runs n_chains independent chains from a zero initial parameter vector.
 * opts may be NULL for defaults. */
GV_API gv_status gv_sample_run(const gv_model* m, const gv_sampler_options* opts, int n_chains,
                               gv_run** out);
GV_API void gv_run_destroy(gv_run* r);

GV_API int gv_run_num_chains(const gv_run* r);
GV_API int gv_run_num_samples(const gv_run* r); /* draws per chain */
GV_API int gv_run_dim(const gv_run* r);
/* Copies chain draws row-major into out (num_samples * dim doubles). */
GV_API gv_status gv_run_draws(const gv_run* r, int chain, double* out);

GV_API unsigned long long gv_run_divergences(const gv_run* r);
GV_API unsigned long long gv_run_newton_steps(const gv_run* r);
GV_API unsigned long long gv_run_fallbacks(const gv_run* r);
GV_API unsigned long long gv_run_solver_failures(const gv_run* r);
GV_API unsigned long long gv_run_leapfrogs(const gv_run* r);
GV_API double gv_run_accept_mean(const gv_run* r);
GV_API double gv_run_step_size(const gv_run* r); /* chain 0 */

/* Cross-chain diagnostics; out holds dim doubles. */
GV_API gv_status gv_run_ess(const gv_run* r, double* out);
GV_API gv_status gv_run_rhat(const gv_run* r, double* out);
GV_API double gv_run_ess_min(const gv_run* r);
GV_API double gv_run_rhat_max(const gv_run* r);
/* 1 iff no divergences, no solver failures, min ESS >= 10% of total draws,
 * and max split-Rhat < 1.01. */
GV_API int gv_run_passed(const gv_run* r);

/* ---- trajectory demo ---- */

typedef struct gv_trajectory gv_trajectory;

/* Draws the start point from the model prior and the momentum from a unit
 * normal (both from seed), integrates one path, and replays it under every
 * guessing heuristic. eps <= 0 selects a step size from the momentum norm. */
GV_API gv_status gv_trajectory_create(const gv_model* m, unsigned long long seed, int n_steps,
                                      double eps, gv_trajectory** out);
GV_API void gv_trajectory_destroy(gv_trajectory* t);

GV_API int gv_trajectory_num_records(const gv_trajectory* t);
GV_API double gv_trajectory_eps(const gv_trajectory* t);
GV_API gv_status gv_trajectory_dims(const gv_trajectory* t, int* theta_dim, int* x_dim);
/* theta holds theta_dim doubles; root and guess hold x_dim doubles. Any
 * output pointer may be NULL to skip that field. */
GV_API gv_status gv_trajectory_record(const gv_trajectory* t, int index, int* step_index,
                                      const char** heuristic, int* newton_iters, double* theta,
                                      double* root, double* guess);

#ifdef __cplusplus
}
#endif

#endif /* GRAPEVINE_H */
