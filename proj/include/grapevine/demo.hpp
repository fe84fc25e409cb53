#ifndef GRAPEVINE_DEMO_HPP
#define GRAPEVINE_DEMO_HPP

#include <vector>

#include "grapevine/integrator.hpp"

namespace grapevine {

struct TrajectoryRecord {
  int step_index = 0;
  Vec theta;
  Vec root;
  Vec guess;
  int newton_iters = 0;
  Heuristic heuristic = Heuristic::Static;
};

struct TrajectoryDemo {
  // heuristic-major (kAllHeuristics order), step index ascending within each
  std::vector<TrajectoryRecord> records;
  double eps_used = 0.0;
};

// Side-by-side guessing comparison on one leapfrog path. The parameter path
// is integrated once at a tightened tolerance; every heuristic then replays
// the identical path at the model tolerance, carrying its own guess info.
// Step 0 is the trajectory-start solve from the default guess. eps <= 0
// selects 0.1 / ||p0||.
TrajectoryDemo run_trajectory_demo(const ModelSpec& model, const Vec& theta0, const Vec& p0,
                                   int n_steps, double eps = 0.0);

}  // namespace grapevine

#endif
