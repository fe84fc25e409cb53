#ifndef GRAPEVINE_ROOTFIND_HPP
#define GRAPEVINE_ROOTFIND_HPP

#include <functional>
#include <utility>

#include "grapevine/linalg.hpp"

namespace grapevine {

struct SolverConfig {
  double tol = 1e-9;          // infinity-norm residual target
  int maxiter = 100;
  double min_step_scale = 1.0 / 256.0;  // backtracking floor
};

// Counters accumulated across a run; non-convergence is reported here,
// never thrown.
struct SolverStats {
  int iterations = 0;
  int residual_evals = 0;
  int jacobian_evals = 0;
  bool converged = false;
  double final_residual_norm = 0.0;
  int fallbacks = 0;  // guess-heuristic fallbacks, folded into run accounting

  void accumulate(const SolverStats& s) {
    iterations += s.iterations;
    residual_evals += s.residual_evals;
    jacobian_evals += s.jacobian_evals;
    fallbacks += s.fallbacks;
    converged = converged && s.converged;
    final_residual_norm = s.final_residual_norm;
  }
};

using ResidualFn = std::function<Vec(const Vec&)>;
using JacobianFn = std::function<Mat(const Vec&)>;

// Damped Newton: solve J dx = -f, backtrack by halving the step until the
// residual norm decreases or the floor is hit. Always performs at least one
// iteration; stops once ||f||_inf <= cfg.tol. Singular jacobians and
// non-finite residuals end the solve with converged=false.
std::pair<Vec, SolverStats> newton_solve(const ResidualFn& residual, const JacobianFn& jac,
                                         const Vec& x0, const SolverConfig& cfg);

}  // namespace grapevine

#endif
