#ifndef GRAPEVINE_TESTS_SUPPORT_HPP
#define GRAPEVINE_TESTS_SUPPORT_HPP

#include <cmath>

#include "grapevine/model.hpp"

namespace grapevine::testsupport {

// Embedded Gaussian: the root map is the identity (residual x - theta), so
// the posterior over theta is exactly
//   N(theta | 0, prior_sd^2 I) * N(y | theta, obs_sd^2 I)
// which makes moments, gradients, and marginal CDFs available in closed form.
inline ModelSpec gauss_model(const Vec& y, double prior_sd, double obs_sd) {
  const std::size_t d = y.size();
  ModelSpec m;
  m.theta_dim = d;
  m.x_dim = d;
  m.residual = [](const Vec& x, const Vec& theta) { return sub(x, theta); };
  m.jac_x = [d](const Vec&, const Vec&) { return Mat::identity(d); };
  m.jac_theta_product = [](const Vec&, const Vec&, const Vec& v) { return scaled(v, -1.0); };
  m.jac_theta_transpose_product = [](const Vec&, const Vec&, const Vec& w) {
    return scaled(w, -1.0);
  };
  m.log_density = [y, prior_sd, obs_sd](const Vec& theta, const Vec& x) {
    double lp = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      lp -= 0.5 * theta[i] * theta[i] / (prior_sd * prior_sd);
      lp -= 0.5 * (x[i] - y[i]) * (x[i] - y[i]) / (obs_sd * obs_sd);
    }
    return lp;
  };
  m.dlogp_dtheta = [prior_sd](const Vec& theta, const Vec&) {
    return scaled(theta, -1.0 / (prior_sd * prior_sd));
  };
  m.dlogp_dx = [y, obs_sd](const Vec&, const Vec& x) {
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = -(x[i] - y[i]) / (obs_sd * obs_sd);
    return g;
  };
  m.default_guess = Vec(d, 0.0);
  m.solver_cfg = {1e-12, 50, 1.0 / 256.0};
  return m;
}

// posterior mean and sd of the gauss_model coordinate i
inline double gauss_post_mean(double y_i, double prior_sd, double obs_sd) {
  const double wp = 1.0 / (prior_sd * prior_sd), wo = 1.0 / (obs_sd * obs_sd);
  return (wo * y_i) / (wp + wo);
}
inline double gauss_post_sd(double prior_sd, double obs_sd) {
  const double wp = 1.0 / (prior_sd * prior_sd), wo = 1.0 / (obs_sd * obs_sd);
  return 1.0 / std::sqrt(wp + wo);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace grapevine::testsupport

#endif
