#include "grapevine/rootfind.hpp"

#include <cmath>
#include <limits>

namespace grapevine {

std::pair<Vec, SolverStats> newton_solve(const ResidualFn& residual, const JacobianFn& jac,
                                         const Vec& x0, const SolverConfig& cfg) {
  SolverStats st;
  Vec x = x0;
  Vec f = residual(x);
  ++st.residual_evals;
  double fn = all_finite(f) ? norm_inf(f) : std::numeric_limits<double>::quiet_NaN();
  st.final_residual_norm = fn;
  if (!std::isfinite(fn)) return {x, st};

  while (st.iterations < cfg.maxiter) {
    const Mat j = jac(x);
    ++st.jacobian_evals;
    if (!all_finite(j)) break;
    const auto delta = solve_dense(j, scaled(f, -1.0));
    if (!delta || !all_finite(*delta)) break;  // singular jacobian

    double s = 1.0;
    Vec x_try, f_try;
    double fn_try;
    for (;;) {
      x_try = axpy(s, *delta, x);
      f_try = residual(x_try);
      ++st.residual_evals;
      fn_try = all_finite(f_try) ? norm_inf(f_try)
                                 : std::numeric_limits<double>::infinity();
      if (fn_try < fn || s <= cfg.min_step_scale) break;
      s *= 0.5;
    }
    ++st.iterations;
    x = x_try;
    f = f_try;
    fn = all_finite(f) ? fn_try : std::numeric_limits<double>::quiet_NaN();
    st.final_residual_norm = fn;
    if (!std::isfinite(fn)) return {x, st};
    if (fn <= cfg.tol) {
      st.converged = true;
      return {x, st};
    }
  }
  return {x, st};
}

}  // namespace grapevine
