#ifndef GRAPEVINE_INTEGRATOR_HPP
#define GRAPEVINE_INTEGRATOR_HPP

#include "grapevine/model.hpp"

namespace grapevine {

struct IntegratorState {
  Vec theta;
  Vec momentum;
  double potential = 0.0;
  Vec grad;
  GuessInfo info;         // always describes the most recent converged solve
  SolverStats cum_stats;  // exact sum of per-solve stats along this path
};

// Start a trajectory: the first evaluation always uses the model default
// guess, never stale info from a previous trajectory.
IntegratorState init_trajectory(const ModelSpec& model, const Vec& theta0, const Vec& p0,
                                Heuristic h);

struct StepOutcome {
  IntegratorState state;
  SolverStats step_stats;  // stats of just this step's solve
};

// One velocity-Verlet step. The guess info rides along so the embedded
// solver is warm-started from the previous step's root. An empty
// inv_mass_diag means unit mass; otherwise the diagonal inverse mass scales
// the position update.
StepOutcome leapfrog_step_ex(const ModelSpec& model, const IntegratorState& s, double eps,
                             Heuristic h, const Vec& inv_mass_diag = {});
IntegratorState leapfrog_step(const ModelSpec& model, const IntegratorState& s, double eps,
                              Heuristic h, const Vec& inv_mass_diag = {});

// H = U(theta) + 1/2 p^T M^-1 p with diagonal M (empty = identity).
double hamiltonian(const IntegratorState& s, const Vec& inv_mass_diag = {});

}  // namespace grapevine

#endif
