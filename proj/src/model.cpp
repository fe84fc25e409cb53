#include "grapevine/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grapevine/rng.hpp"

namespace grapevine {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double rel_err(double approx, double exact, double scale) {
  return std::abs(approx - exact) / std::max(1.0, std::max(std::abs(exact), scale));
}
}  // namespace

DensityEval log_density_and_info(const ModelSpec& model, const Vec& theta, const GuessInfo& info,
                                 Heuristic h) {
  DensityEval out;
  const GuessOutcome g = make_guess(h, model.default_guess, info, theta, model);
  auto [root, stats] = newton_solve([&](const Vec& x) { return model.residual(x, theta); },
                                    [&](const Vec& x) { return model.jac_x(x, theta); }, g.guess,
                                    model.solver_cfg);
  stats.fallbacks = g.fell_back ? 1 : 0;
  out.stats = stats;
  if (!stats.converged) {
    out.lp = -kInf;
    out.info_next = info;
    return out;
  }
  out.lp = model.log_density(theta, root);
  out.info_next = GuessInfo{std::move(root), theta, true};
  return out;
}

EvalResult potential_and_gradient(const ModelSpec& model, const Vec& theta, const GuessInfo& info,
                                  Heuristic h) {
  EvalResult res;
  res.grad = Vec(model.theta_dim, 0.0);
  res.potential = kInf;

  DensityEval d = log_density_and_info(model, theta, info, h);
  res.stats = d.stats;
  res.info_next = d.info_next;
  if (!d.stats.converged) return res;

  const Vec& root = d.info_next.x_prev;
  const Vec gx = model.dlogp_dx(theta, root);
  const auto lambda = solve_dense(model.jac_x(root, theta).transposed(), gx);
  if (!lambda) {
    // singular adjoint system at a converged root: same contract as a
    // failed solve, and the stale info is kept
    res.stats.converged = false;
    res.info_next = info;
    return res;
  }
  const Vec gtheta = model.dlogp_dtheta(theta, root);
  const Vec corr = model.jac_theta_transpose_product(root, theta, *lambda);
  for (std::size_t i = 0; i < model.theta_dim; ++i) res.grad[i] = -(gtheta[i] - corr[i]);
  res.potential = -d.lp;
  return res;
}

double SelfTestReport::worst() const {
  return std::max({max_jac_x_err, max_jac_theta_err, max_adjoint_gap, max_dlogp_dtheta_err,
                   max_dlogp_dx_err});
}

SelfTestReport self_test(const ModelSpec& model, std::uint64_t seed, int n_points) {
  SelfTestReport rep;
  Rng rng(seed, 0x5e1f);

  for (int pt = 0; pt < n_points; ++pt) {
    Vec theta(model.theta_dim), x(model.x_dim);
    for (auto& t : theta) t = 0.5 * rng.normal();
    for (std::size_t i = 0; i < model.x_dim; ++i)
      x[i] = model.default_guess[i] + 0.3 * rng.normal();

    // residual jacobian in x
    const Mat jx = model.jac_x(x, theta);
    const Mat jx_fd =
        finite_diff_jacobian([&](const Vec& xx) { return model.residual(xx, theta); }, x);
    double scale = 0.0;
    for (std::size_t i = 0; i < jx_fd.rows(); ++i)
      for (std::size_t j = 0; j < jx_fd.cols(); ++j) scale = std::max(scale, std::abs(jx_fd(i, j)));
    for (std::size_t i = 0; i < jx.rows(); ++i)
      for (std::size_t j = 0; j < jx.cols(); ++j)
        rep.max_jac_x_err = std::max(rep.max_jac_x_err, rel_err(jx(i, j), jx_fd(i, j), scale));

    // parameter-direction products against directional differences
    for (int rep_dir = 0; rep_dir < 3; ++rep_dir) {
      Vec v(model.theta_dim);
      for (auto& c : v) c = rng.normal();
      const double vn = norm2(v);
      if (vn == 0.0) continue;
      for (auto& c : v) c /= vn;
      const Vec jv = model.jac_theta_product(x, theta, v);
      const double h = 1e-6;
      const Vec fp = model.residual(x, axpy(h, v, theta));
      const Vec fm = model.residual(x, axpy(-h, v, theta));
      Vec jv_fd(fp.size());
      for (std::size_t i = 0; i < fp.size(); ++i) jv_fd[i] = (fp[i] - fm[i]) / (2.0 * h);
      const double s = norm_inf(jv_fd);
      for (std::size_t i = 0; i < jv.size(); ++i)
        rep.max_jac_theta_err = std::max(rep.max_jac_theta_err, rel_err(jv[i], jv_fd[i], s));

      // adjoint identity <J v, w> == <v, J^T w>
      Vec w(model.x_dim);
      for (auto& c : w) c = rng.normal();
      const Vec jtw = model.jac_theta_transpose_product(x, theta, w);
      const double lhs = dot(jv, w);
      const double rhs = dot(v, jtw);
      rep.max_adjoint_gap = std::max(rep.max_adjoint_gap, rel_err(lhs, rhs, 0.0));
    }

    // density partials
    const Vec gt = model.dlogp_dtheta(theta, x);
    const Vec gx = model.dlogp_dx(theta, x);
    for (std::size_t j = 0; j < model.theta_dim; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(theta[j]));
      Vec tp = theta, tm = theta;
      tp[j] += h;
      tm[j] -= h;
      const double fd = (model.log_density(tp, x) - model.log_density(tm, x)) / (2.0 * h);
      rep.max_dlogp_dtheta_err =
          std::max(rep.max_dlogp_dtheta_err, rel_err(gt[j], fd, norm_inf(gt)));
    }
    for (std::size_t j = 0; j < model.x_dim; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
      Vec xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const double fd = (model.log_density(theta, xp) - model.log_density(theta, xm)) / (2.0 * h);
      rep.max_dlogp_dx_err = std::max(rep.max_dlogp_dx_err, rel_err(gx[j], fd, norm_inf(gx)));
    }
  }
  return rep;
}

}  // namespace grapevine
