#ifndef GRAPEVINE_REGISTRY_HPP
#define GRAPEVINE_REGISTRY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grapevine/model.hpp"
#include "grapevine/rng.hpp"

namespace grapevine {

struct ModelOptions {
  double sigma_theta = 1.0;  // prior scale for the test-function family
  double sigma_y = 0.05;     // observation noise (doubles as the pathway sigma_obs)
  double solver_tol = 0.0;   // <= 0 picks the per-model default
  int solver_maxiter = 100;
};

struct SimulatedDataset {
  Vec theta_true;
  Vec observations;
  double noise_sd = 0.0;
};

struct BuiltModel {
  std::string name;
  ModelSpec spec;
  SimulatedDataset dataset;
  double solver_tol = 0.0;  // resolved value, for config echo
  int solver_maxiter = 0;
  std::function<Vec(Rng&)> prior_draw;
};

// The eight benchmark targets, in grid order.
const std::vector<std::string>& registry_names();
bool is_registered_model(std::string_view name);

// Draw true parameters from the prior, solve the embedded problem tightly,
// and observe the root under Gaussian noise. Deterministic per seed; if the
// tight solve fails the next sub-seed is tried (up to 10 attempts).
std::optional<SimulatedDataset> simulate_dataset(std::string_view name, std::uint64_t seed,
                                                 const ModelOptions& opts = {});

std::optional<BuiltModel> build_model(std::string_view name, std::uint64_t data_seed,
                                      const ModelOptions& opts = {});

// Dataset stream for benchmark cell (model, seed): distinct per model so
// same-dimension targets do not share parameter draws.
std::uint64_t derive_data_seed(std::string_view name, std::uint64_t run_seed);

}  // namespace grapevine

#endif
