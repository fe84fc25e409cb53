#include "grapevine/demo.hpp"

#include <algorithm>
#include <cmath>

namespace grapevine {

TrajectoryDemo run_trajectory_demo(const ModelSpec& model, const Vec& theta0, const Vec& p0,
                                   int n_steps, double eps) {
  double e = eps;
  if (!(e > 0.0)) e = 0.1 / std::max(norm2(p0), 1e-12);

  // one reference path, integrated tighter than any replay will solve, so
  // the heuristics face byte-identical parameter sequences
  ModelSpec ref = model;
  ref.solver_cfg.tol = std::min(model.solver_cfg.tol, 1e-12);
  std::vector<Vec> path;
  path.reserve(static_cast<std::size_t>(n_steps) + 1);
  path.push_back(theta0);
  IntegratorState s = init_trajectory(ref, theta0, p0, Heuristic::Static);
  for (int k = 0; k < n_steps; ++k) {
    s = leapfrog_step(ref, s, e, Heuristic::Static);
    path.push_back(s.theta);
  }

  TrajectoryDemo demo;
  demo.eps_used = e;
  demo.records.reserve(path.size() * kAllHeuristics.size());
  for (Heuristic h : kAllHeuristics) {
    GuessInfo info;
    for (std::size_t k = 0; k < path.size(); ++k) {
      const Vec& th = path[k];
      const GuessOutcome g = make_guess(h, model.default_guess, info, th, model);
      const auto residual = [&](const Vec& x) { return model.residual(x, th); };
      const auto jac = [&](const Vec& x) { return model.jac_x(x, th); };
      const auto [root, stats] = newton_solve(residual, jac, g.guess, model.solver_cfg);
      if (stats.converged) info = {root, th, true};

      TrajectoryRecord rec;
      rec.step_index = static_cast<int>(k);
      rec.theta = th;
      rec.root = root;
      rec.guess = g.guess;
      rec.newton_iters = stats.iterations;
      rec.heuristic = h;
      demo.records.push_back(std::move(rec));
    }
  }
  return demo;
}

}  // namespace grapevine
