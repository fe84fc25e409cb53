#ifndef GRAPEVINE_MODEL_HPP
#define GRAPEVINE_MODEL_HPP

#include <cstdint>
#include <functional>

#include "grapevine/guessing.hpp"
#include "grapevine/linalg.hpp"
#include "grapevine/rootfind.hpp"

namespace grapevine {

// A target density with an embedded root-finding problem: the residual
// f(x, theta) defines x*(theta) implicitly, and log_density is evaluated at
// the converged root. All derivative callbacks are analytic.
struct ModelSpec {
  std::size_t theta_dim = 0;
  std::size_t x_dim = 0;

  std::function<Vec(const Vec& x, const Vec& theta)> residual;
  std::function<Mat(const Vec& x, const Vec& theta)> jac_x;
  // directional derivative J_theta v and its adjoint J_theta^T w
  std::function<Vec(const Vec& x, const Vec& theta, const Vec& v)> jac_theta_product;
  std::function<Vec(const Vec& x, const Vec& theta, const Vec& w)> jac_theta_transpose_product;

  std::function<double(const Vec& theta, const Vec& x)> log_density;
  std::function<Vec(const Vec& theta, const Vec& x)> dlogp_dtheta;
  std::function<Vec(const Vec& theta, const Vec& x)> dlogp_dx;

  Vec default_guess;
  SolverConfig solver_cfg;
};

struct DensityEval {
  double lp = 0.0;
  GuessInfo info_next;
  SolverStats stats;
};

// Solve the embedded problem from the heuristic's guess, then evaluate the
// density at the root. On non-convergence lp is -inf and the guess info is
// left untouched.
DensityEval log_density_and_info(const ModelSpec& model, const Vec& theta, const GuessInfo& info,
                                 Heuristic h);

struct EvalResult {
  double potential = 0.0;  // +inf on solver failure
  Vec grad;                // d potential / d theta; zero on failure
  GuessInfo info_next;
  SolverStats stats;
};

// Potential U = -lp with the parameter gradient propagated through the root
// by one adjoint solve: J_x^T lambda = dlogp_dx, then
// grad lp = dlogp_dtheta - J_theta^T lambda.
EvalResult potential_and_gradient(const ModelSpec& model, const Vec& theta, const GuessInfo& info,
                                  Heuristic h);

struct SelfTestReport {
  double max_jac_x_err = 0.0;
  double max_jac_theta_err = 0.0;
  double max_adjoint_gap = 0.0;
  double max_dlogp_dtheta_err = 0.0;
  double max_dlogp_dx_err = 0.0;

  double worst() const;
  bool passed(double tol = 1e-5) const { return worst() < tol; }
};

// Checks every analytic callback against central finite differences at
// randomly drawn (theta, x) points. Returns the maximum relative errors.
SelfTestReport self_test(const ModelSpec& model, std::uint64_t seed, int n_points = 20);

}  // namespace grapevine

#endif
