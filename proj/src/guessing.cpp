#include "grapevine/guessing.hpp"

#include "grapevine/model.hpp"

namespace grapevine {

const char* heuristic_name(Heuristic h) {
  switch (h) {
    case Heuristic::Static: return "static";
    case Heuristic::Previous: return "previous";
    case Heuristic::ImplicitDirect: return "implicit";
    case Heuristic::ImplicitMatFree: return "implicit-cg";
  }
  return "unknown";
}

std::optional<Heuristic> parse_heuristic(std::string_view name) {
  for (Heuristic h : kAllHeuristics)
    if (name == heuristic_name(h)) return h;
  return std::nullopt;
}

Vec guess_static(const Vec& default_guess, const GuessInfo&) { return default_guess; }

Vec guess_previous(const Vec& default_guess, const GuessInfo& info) {
  return info.valid ? info.x_prev : default_guess;
}

GuessOutcome guess_implicit(const Vec& default_guess, const GuessInfo& info, const Vec& theta_next,
                            const ModelSpec& model, bool matrix_free, double cg_tol,
                            int cg_maxiter) {
  if (!info.valid) return {default_guess, false};

  const Vec dtheta = sub(theta_next, info.theta_prev);
  // rhs = -J_theta dtheta, one directional derivative
  const Vec rhs = scaled(model.jac_theta_product(info.x_prev, info.theta_prev, dtheta), -1.0);
  const Mat jx = model.jac_x(info.x_prev, info.theta_prev);

  if (!matrix_free) {
    if (const auto dx = solve_dense(jx, rhs); dx && all_finite(*dx))
      return {add(info.x_prev, *dx), false};
    return {guess_previous(default_guess, info), true};
  }

  const LinearOperator op{[&jx](const Vec& v) { return jx.apply(v); }, model.x_dim};
  const CgResult cg = cg_solve(op, rhs, cg_tol, cg_maxiter);
  if (cg.converged && all_finite(cg.x)) return {add(info.x_prev, cg.x), false};
  return {guess_previous(default_guess, info), true};
}

GuessOutcome make_guess(Heuristic h, const Vec& default_guess, const GuessInfo& info,
                        const Vec& theta_next, const ModelSpec& model) {
  switch (h) {
    case Heuristic::Static:
      return {guess_static(default_guess, info), false};
    case Heuristic::Previous:
      return {guess_previous(default_guess, info), false};
    case Heuristic::ImplicitDirect:
      return guess_implicit(default_guess, info, theta_next, model, false, 1e-8,
                            2 * static_cast<int>(model.x_dim));
    case Heuristic::ImplicitMatFree:
      return guess_implicit(default_guess, info, theta_next, model, true, 1e-8,
                            2 * static_cast<int>(model.x_dim));
  }
  return {default_guess, false};
}

}  // namespace grapevine
