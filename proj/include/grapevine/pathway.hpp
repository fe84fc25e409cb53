#ifndef GRAPEVINE_PATHWAY_HPP
#define GRAPEVINE_PATHWAY_HPP

#include "grapevine/model.hpp"

namespace grapevine {

// Three-reaction pathway ext_A -> int_A -> int_B -> ext_B with a
// reversible mass-action boundary step on each side and a reversible
// Michaelis-Menten step in the middle. The steady state of the two
// internal species is the embedded root-finding problem, solved in log
// concentration space so iterates stay positive.
//
// Parameters (all sampled on log scale, prior Normal(loc, scale)):
//   0 km_a, 1 km_b, 2 vmax, 3 keq_1, 4 keq_2, 5 keq_3, 6 kf_1, 7 kf_3
struct PathwayConfig {
  Vec prior_loc = Vec(8, 0.0);
  Vec prior_scale = Vec(8, 0.2);
  double x_ext_a = 5.0;
  double x_ext_b = 1.0;
  double sigma_obs = 0.05;
};

inline constexpr std::size_t kPathwayParams = 8;

// Reaction rates (v1, v2, v3) at natural concentrations and parameters;
// exposed so tests can check flux balance at a steady state.
Vec pathway_rates(double a, double b, const Vec& k, double x_ext_a, double x_ext_b);

// data holds the two observed log concentrations.
ModelSpec make_pathway_model(const PathwayConfig& cfg, const Vec& data,
                             const SolverConfig& solver_cfg = {1e-6, 100, 1.0 / 256.0});

}  // namespace grapevine

#endif
