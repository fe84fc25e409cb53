#ifndef GRAPEVINE_NUTS_HPP
#define GRAPEVINE_NUTS_HPP

#include <cstdint>
#include <vector>

#include "grapevine/integrator.hpp"

namespace grapevine {

struct SamplerConfig {
  int num_warmup = 500;
  int num_samples = 500;
  int max_tree_depth = 10;
  double target_accept = 0.8;
  double init_step_size = 0.1;
  std::uint64_t seed = 0;
  Heuristic heuristic = Heuristic::Static;
};

struct ChainResult {
  std::vector<Vec> draws;  // num_samples rows of theta
  std::uint64_t divergences = 0;        // post-warmup iterations with a divergence
  std::uint64_t total_newton_steps = 0; // solver iterations over the whole run
  std::uint64_t fallback_count = 0;
  std::uint64_t solver_failures = 0;    // failed solves, warmup included
  std::uint64_t total_leapfrogs = 0;
  double accept_stat_mean = 0.0;        // over post-warmup iterations
  double adapted_step_size = 0.0;
  Vec adapted_inv_mass;
};

struct WarmupResult {
  double step_size = 0.0;
  Vec inv_mass_diag;
  Vec theta;
};

// Dual-averaging step-size adaptation toward cfg.target_accept plus a
// diagonal mass matrix from Welford variance over the middle window
// (fast/slow/fast = 15%/75%/10% of num_warmup).
WarmupResult warmup_adapt(const ModelSpec& model, const SamplerConfig& cfg, const Vec& theta_init);

// Multinomial no-U-turn sampling with the guess info threaded per trajectory
// endpoint. Every trajectory starts from the model default guess.
ChainResult sample(const ModelSpec& model, const SamplerConfig& cfg, const Vec& theta_init);

// Independent chains with per-chain seeds split from cfg.seed.
std::vector<ChainResult> run_chains(const ModelSpec& model, const SamplerConfig& cfg,
                                    int n_chains, const Vec& theta_init);

}  // namespace grapevine

#endif
