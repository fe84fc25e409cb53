#include "grapevine/grapevine.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "grapevine/demo.hpp"
#include "grapevine/diagnostics.hpp"
#include "grapevine/nuts.hpp"
#include "grapevine/registry.hpp"

using namespace grapevine;

struct gv_model {
  BuiltModel built;
};

struct gv_run {
  std::vector<ChainResult> chains;
  Vec ess_per_dim;
  Vec rhat_per_dim;
  RunVerdict v;
  int dim = 0;
};

struct gv_trajectory {
  TrajectoryDemo demo;
  int theta_dim = 0;
  int x_dim = 0;
};

extern "C" {

const char* gv_status_string(gv_status s) {
  switch (s) {
    case GV_OK: return "ok";
    case GV_ERR_BAD_ARG: return "bad argument";
    case GV_ERR_UNKNOWN_MODEL: return "unknown model";
    case GV_ERR_UNKNOWN_HEURISTIC: return "unknown heuristic";
    case GV_ERR_SIMULATION_FAILED: return "dataset simulation failed";
    case GV_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int gv_model_count(void) { return static_cast<int>(registry_names().size()); }

const char* gv_model_name(int index) {
  const auto& names = registry_names();
  if (index < 0 || index >= static_cast<int>(names.size())) return nullptr;
  return names[static_cast<std::size_t>(index)].c_str();
}

int gv_model_exists(const char* name) { return name && is_registered_model(name) ? 1 : 0; }

int gv_heuristic_count(void) { return static_cast<int>(kAllHeuristics.size()); }

const char* gv_heuristic_name(int index) {
  if (index < 0 || index >= static_cast<int>(kAllHeuristics.size())) return nullptr;
  return heuristic_name(kAllHeuristics[static_cast<std::size_t>(index)]);
}

int gv_heuristic_exists(const char* name) {
  return name && parse_heuristic(name).has_value() ? 1 : 0;
}

unsigned long long gv_data_seed(const char* model, unsigned long long run_seed) {
  if (!model) return 0;
  return derive_data_seed(model, run_seed);
}

void gv_model_options_default(gv_model_options* opts) {
  if (!opts) return;
  const ModelOptions d;
  opts->sigma_theta = d.sigma_theta;
  opts->sigma_y = d.sigma_y;
  opts->solver_tol = d.solver_tol;
  opts->solver_maxiter = d.solver_maxiter;
}

gv_status gv_model_create(const char* name, unsigned long long data_seed,
                          const gv_model_options* opts, gv_model** out) {
  if (!name || !out) return GV_ERR_BAD_ARG;
  *out = nullptr;
  if (!is_registered_model(name)) return GV_ERR_UNKNOWN_MODEL;

  ModelOptions mo;
  if (opts) {
    mo.sigma_theta = opts->sigma_theta;
    mo.sigma_y = opts->sigma_y;
    mo.solver_tol = opts->solver_tol;
    mo.solver_maxiter = opts->solver_maxiter;
  }
  try {
    auto built = build_model(name, data_seed, mo);
    if (!built) return GV_ERR_SIMULATION_FAILED;
    *out = new gv_model{std::move(*built)};
    return GV_OK;
  } catch (...) {
    return GV_ERR_INTERNAL;
  }
}

void gv_model_destroy(gv_model* m) { delete m; }

int gv_model_theta_dim(const gv_model* m) {
  return m ? static_cast<int>(m->built.spec.theta_dim) : 0;
}

int gv_model_x_dim(const gv_model* m) { return m ? static_cast<int>(m->built.spec.x_dim) : 0; }

double gv_model_solver_tol(const gv_model* m) { return m ? m->built.solver_tol : 0.0; }

int gv_model_solver_maxiter(const gv_model* m) { return m ? m->built.solver_maxiter : 0; }

gv_status gv_model_self_test(const gv_model* m, unsigned long long seed, double* worst_rel_err) {
  if (!m || !worst_rel_err) return GV_ERR_BAD_ARG;
  try {
    *worst_rel_err = self_test(m->built.spec, seed).worst();
    return GV_OK;
  } catch (...) {
    return GV_ERR_INTERNAL;
  }
}

void gv_sampler_options_default(gv_sampler_options* opts) {
  if (!opts) return;
  const SamplerConfig d;
  opts->num_warmup = d.num_warmup;
  opts->num_samples = d.num_samples;
  opts->max_tree_depth = d.max_tree_depth;
  opts->target_accept = d.target_accept;
  opts->init_step_size = d.init_step_size;
  opts->seed = d.seed;
  opts->heuristic = "static";
}

gv_status gv_sample_run(const gv_model* m, const gv_sampler_options* opts, int n_chains,
                        gv_run** out) {
  if (!m || !out || n_chains < 1) return GV_ERR_BAD_ARG;
  *out = nullptr;

  SamplerConfig cfg;
  if (opts) {
    if (opts->num_warmup < 0 || opts->num_samples < 0) return GV_ERR_BAD_ARG;
    cfg.num_warmup = opts->num_warmup;
    cfg.num_samples = opts->num_samples;
    cfg.max_tree_depth = opts->max_tree_depth;
    cfg.target_accept = opts->target_accept;
    cfg.init_step_size = opts->init_step_size;
    cfg.seed = opts->seed;
    if (!opts->heuristic) return GV_ERR_BAD_ARG;
    const auto h = parse_heuristic(opts->heuristic);
    if (!h) return GV_ERR_UNKNOWN_HEURISTIC;
    cfg.heuristic = *h;
  }

  try {
    const Vec theta0(m->built.spec.theta_dim, 0.0);
    auto r = new gv_run;
    r->chains = run_chains(m->built.spec, cfg, n_chains, theta0);
    r->dim = static_cast<int>(m->built.spec.theta_dim);
    r->v = verdict(r->chains);
    std::vector<std::vector<Vec>> stacked;
    for (const auto& c : r->chains)
      if (!c.draws.empty()) stacked.push_back(c.draws);
    if (!stacked.empty()) {
      r->ess_per_dim = ess(stacked);
      r->rhat_per_dim = split_rhat(stacked);
    }
    *out = r;
    return GV_OK;
  } catch (...) {
    return GV_ERR_INTERNAL;
  }
}

void gv_run_destroy(gv_run* r) { delete r; }

int gv_run_num_chains(const gv_run* r) { return r ? static_cast<int>(r->chains.size()) : 0; }

int gv_run_num_samples(const gv_run* r) {
  return r && !r->chains.empty() ? static_cast<int>(r->chains[0].draws.size()) : 0;
}

int gv_run_dim(const gv_run* r) { return r ? r->dim : 0; }

gv_status gv_run_draws(const gv_run* r, int chain, double* out) {
  if (!r || !out || chain < 0 || chain >= static_cast<int>(r->chains.size()))
    return GV_ERR_BAD_ARG;
  const auto& draws = r->chains[static_cast<std::size_t>(chain)].draws;
  double* p = out;
  for (const Vec& row : draws) {
    std::memcpy(p, row.data(), row.size() * sizeof(double));
    p += row.size();
  }
  return GV_OK;
}

unsigned long long gv_run_divergences(const gv_run* r) {
  unsigned long long n = 0;
  if (r)
    for (const auto& c : r->chains) n += c.divergences;
  return n;
}

unsigned long long gv_run_newton_steps(const gv_run* r) {
  unsigned long long n = 0;
  if (r)
    for (const auto& c : r->chains) n += c.total_newton_steps;
  return n;
}

unsigned long long gv_run_fallbacks(const gv_run* r) {
  unsigned long long n = 0;
  if (r)
    for (const auto& c : r->chains) n += c.fallback_count;
  return n;
}

unsigned long long gv_run_solver_failures(const gv_run* r) {
  unsigned long long n = 0;
  if (r)
    for (const auto& c : r->chains) n += c.solver_failures;
  return n;
}

unsigned long long gv_run_leapfrogs(const gv_run* r) {
  unsigned long long n = 0;
  if (r)
    for (const auto& c : r->chains) n += c.total_leapfrogs;
  return n;
}

double gv_run_accept_mean(const gv_run* r) {
  if (!r || r->chains.empty()) return 0.0;
  double s = 0.0;
  for (const auto& c : r->chains) s += c.accept_stat_mean;
  return s / static_cast<double>(r->chains.size());
}

double gv_run_step_size(const gv_run* r) {
  return r && !r->chains.empty() ? r->chains[0].adapted_step_size : 0.0;
}

gv_status gv_run_ess(const gv_run* r, double* out) {
  if (!r || !out) return GV_ERR_BAD_ARG;
  if (static_cast<int>(r->ess_per_dim.size()) != r->dim) return GV_ERR_INTERNAL;
  std::memcpy(out, r->ess_per_dim.data(), r->ess_per_dim.size() * sizeof(double));
  return GV_OK;
}

gv_status gv_run_rhat(const gv_run* r, double* out) {
  if (!r || !out) return GV_ERR_BAD_ARG;
  if (static_cast<int>(r->rhat_per_dim.size()) != r->dim) return GV_ERR_INTERNAL;
  std::memcpy(out, r->rhat_per_dim.data(), r->rhat_per_dim.size() * sizeof(double));
  return GV_OK;
}

double gv_run_ess_min(const gv_run* r) { return r ? r->v.ess_bulk_min : 0.0; }

double gv_run_rhat_max(const gv_run* r) { return r ? r->v.rhat_max : 0.0; }

int gv_run_passed(const gv_run* r) { return r && r->v.passed ? 1 : 0; }

gv_status gv_trajectory_create(const gv_model* m, unsigned long long seed, int n_steps, double eps,
                               gv_trajectory** out) {
  if (!m || !out || n_steps < 0) return GV_ERR_BAD_ARG;
  *out = nullptr;
  try {
    Rng rng(seed, 0x7261);  // trajectory stream, separate from sampling
    Vec theta0 = m->built.prior_draw(rng);
    Vec p0(m->built.spec.theta_dim);
    for (auto& v : p0) v = rng.normal();

    auto t = new gv_trajectory;
    t->demo = run_trajectory_demo(m->built.spec, theta0, p0, n_steps, eps);
    t->theta_dim = static_cast<int>(m->built.spec.theta_dim);
    t->x_dim = static_cast<int>(m->built.spec.x_dim);
    *out = t;
    return GV_OK;
  } catch (...) {
    return GV_ERR_INTERNAL;
  }
}

void gv_trajectory_destroy(gv_trajectory* t) { delete t; }

int gv_trajectory_num_records(const gv_trajectory* t) {
  return t ? static_cast<int>(t->demo.records.size()) : 0;
}

double gv_trajectory_eps(const gv_trajectory* t) { return t ? t->demo.eps_used : 0.0; }

gv_status gv_trajectory_dims(const gv_trajectory* t, int* theta_dim, int* x_dim) {
  if (!t) return GV_ERR_BAD_ARG;
  if (theta_dim) *theta_dim = t->theta_dim;
  if (x_dim) *x_dim = t->x_dim;
  return GV_OK;
}

gv_status gv_trajectory_record(const gv_trajectory* t, int index, int* step_index,
                               const char** heuristic, int* newton_iters, double* theta,
                               double* root, double* guess) {
  if (!t || index < 0 || index >= static_cast<int>(t->demo.records.size()))
    return GV_ERR_BAD_ARG;
  const TrajectoryRecord& rec = t->demo.records[static_cast<std::size_t>(index)];
  if (step_index) *step_index = rec.step_index;
  if (heuristic) *heuristic = heuristic_name(rec.heuristic);
  if (newton_iters) *newton_iters = rec.newton_iters;
  if (theta) std::memcpy(theta, rec.theta.data(), rec.theta.size() * sizeof(double));
  if (root) std::memcpy(root, rec.root.data(), rec.root.size() * sizeof(double));
  if (guess) std::memcpy(guess, rec.guess.data(), rec.guess.size() * sizeof(double));
  return GV_OK;
}

}  // extern "C"
