#include "grapevine/integrator.hpp"

namespace grapevine {

IntegratorState init_trajectory(const ModelSpec& model, const Vec& theta0, const Vec& p0,
                                Heuristic h) {
  const EvalResult e = potential_and_gradient(model, theta0, GuessInfo{}, h);
  IntegratorState s;
  s.theta = theta0;
  s.momentum = p0;
  s.potential = e.potential;
  s.grad = e.grad;
  s.info = e.info_next;
  s.cum_stats = e.stats;
  return s;
}

StepOutcome leapfrog_step_ex(const ModelSpec& model, const IntegratorState& s, double eps,
                             Heuristic h, const Vec& inv_mass_diag) {
  const std::size_t n = s.theta.size();
  Vec p_half(n), theta_next(n);
  for (std::size_t i = 0; i < n; ++i) p_half[i] = s.momentum[i] - 0.5 * eps * s.grad[i];
  for (std::size_t i = 0; i < n; ++i) {
    const double v = inv_mass_diag.empty() ? p_half[i] : inv_mass_diag[i] * p_half[i];
    theta_next[i] = s.theta[i] + eps * v;
  }
  const EvalResult e = potential_and_gradient(model, theta_next, s.info, h);
  // a failed solve leaves the gradient zero, so the momentum half-step
  // passes through unchanged and the state is flagged by potential=+inf
  Vec p_next(n);
  for (std::size_t i = 0; i < n; ++i) p_next[i] = p_half[i] - 0.5 * eps * e.grad[i];

  StepOutcome out;
  out.state.theta = std::move(theta_next);
  out.state.momentum = std::move(p_next);
  out.state.potential = e.potential;
  out.state.grad = e.grad;
  out.state.info = e.info_next;
  out.state.cum_stats = s.cum_stats;
  out.state.cum_stats.accumulate(e.stats);
  out.step_stats = e.stats;
  return out;
}

IntegratorState leapfrog_step(const ModelSpec& model, const IntegratorState& s, double eps,
                              Heuristic h, const Vec& inv_mass_diag) {
  return leapfrog_step_ex(model, s, eps, h, inv_mass_diag).state;
}

double hamiltonian(const IntegratorState& s, const Vec& inv_mass_diag) {
  double kin = 0.0;
  for (std::size_t i = 0; i < s.momentum.size(); ++i) {
    const double im = inv_mass_diag.empty() ? 1.0 : inv_mass_diag[i];
    kin += 0.5 * im * s.momentum[i] * s.momentum[i];
  }
  return s.potential + kin;
}

}  // namespace grapevine
