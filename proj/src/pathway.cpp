#include "grapevine/pathway.hpp"

#include <cmath>

#include "grapevine/testfunctions.hpp"  // log_normal_pdf

namespace grapevine {

namespace {

enum { kKmA, kKmB, kVmax, kKeq1, kKeq2, kKeq3, kKf1, kKf3 };

struct Rates {
  double a, b;          // natural concentrations
  double k[8];          // natural parameters
  double v1, v2, v3;
  double num, den;      // Michaelis-Menten numerator and denominator
  double xa, xb;

  Rates(const Vec& u, const Vec& theta, double x_ext_a, double x_ext_b) {
    a = std::exp(u[0]);
    b = std::exp(u[1]);
    for (std::size_t j = 0; j < kPathwayParams; ++j) k[j] = std::exp(theta[j]);
    xa = x_ext_a;
    xb = x_ext_b;
    v1 = k[kKf1] * (xa - a / k[kKeq1]);
    num = (k[kVmax] / k[kKmA]) * (a - b / k[kKeq2]);
    den = 1.0 + a / k[kKmA] + b / k[kKmB];
    v2 = num / den;
    v3 = k[kKf3] * (xb - b / k[kKeq3]);
  }

  // stoichiometry S = [[1,-1,0],[0,1,-1]]
  Vec residual() const { return {v1 - v2, v2 - v3}; }

  // partials of the rates with respect to the natural concentrations
  void conc_partials(double& dv1_da, double& dv2_da, double& dv2_db, double& dv3_db) const {
    dv1_da = -k[kKf1] / k[kKeq1];
    const double dnum_da = k[kVmax] / k[kKmA];
    const double dnum_db = -k[kVmax] / (k[kKmA] * k[kKeq2]);
    const double dden_da = 1.0 / k[kKmA];
    const double dden_db = 1.0 / k[kKmB];
    dv2_da = (dnum_da * den - num * dden_da) / (den * den);
    dv2_db = (dnum_db * den - num * dden_db) / (den * den);
    dv3_db = -k[kKf3] / k[kKeq3];
  }

  // partials of the rates with respect to the natural parameters
  void param_partials(double dv1[8], double dv2[8], double dv3[8]) const {
    for (int j = 0; j < 8; ++j) dv1[j] = dv2[j] = dv3[j] = 0.0;
    dv1[kKf1] = xa - a / k[kKeq1];
    dv1[kKeq1] = k[kKf1] * a / (k[kKeq1] * k[kKeq1]);
    const double den2 = den * den;
    dv2[kVmax] = (num / k[kVmax]) / den;
    dv2[kKmA] = ((-num / k[kKmA]) * den - num * (-a / (k[kKmA] * k[kKmA]))) / den2;
    dv2[kKmB] = num * b / (k[kKmB] * k[kKmB] * den2);
    dv2[kKeq2] = (k[kVmax] / k[kKmA]) * (b / (k[kKeq2] * k[kKeq2])) / den;
    dv3[kKeq3] = k[kKf3] * b / (k[kKeq3] * k[kKeq3]);
    dv3[kKf3] = xb - b / k[kKeq3];
  }
};

}  // namespace

Vec pathway_rates(double a, double b, const Vec& k, double x_ext_a, double x_ext_b) {
  const double v1 = k[kKf1] * (x_ext_a - a / k[kKeq1]);
  const double den = 1.0 + a / k[kKmA] + b / k[kKmB];
  const double v2 = (k[kVmax] / k[kKmA]) * (a - b / k[kKeq2]) / den;
  const double v3 = k[kKf3] * (x_ext_b - b / k[kKeq3]);
  return {v1, v2, v3};
}

ModelSpec make_pathway_model(const PathwayConfig& cfg, const Vec& data,
                             const SolverConfig& solver_cfg) {
  ModelSpec m;
  m.theta_dim = kPathwayParams;
  m.x_dim = 2;
  m.solver_cfg = solver_cfg;

  const double xa = cfg.x_ext_a, xb = cfg.x_ext_b;

  m.residual = [xa, xb](const Vec& u, const Vec& theta) {
    return Rates(u, theta, xa, xb).residual();
  };

  m.jac_x = [xa, xb](const Vec& u, const Vec& theta) {
    const Rates r(u, theta, xa, xb);
    double dv1_da, dv2_da, dv2_db, dv3_db;
    r.conc_partials(dv1_da, dv2_da, dv2_db, dv3_db);
    // chain to log space: d/du = d/dconc * conc
    Mat j(2, 2);
    j(0, 0) = (dv1_da - dv2_da) * r.a;
    j(0, 1) = (-dv2_db) * r.b;
    j(1, 0) = dv2_da * r.a;
    j(1, 1) = (dv2_db - dv3_db) * r.b;
    return j;
  };

  // forward pass: push one log-parameter tangent through the rates
  m.jac_theta_product = [xa, xb](const Vec& u, const Vec& theta, const Vec& t) {
    const Rates r(u, theta, xa, xb);
    double dv1[8], dv2[8], dv3[8];
    r.param_partials(dv1, dv2, dv3);
    double d1 = 0.0, d2 = 0.0, d3 = 0.0;
    for (std::size_t j = 0; j < kPathwayParams; ++j) {
      const double dk = r.k[j] * t[j];  // natural tangent of exp(theta_j)
      d1 += dv1[j] * dk;
      d2 += dv2[j] * dk;
      d3 += dv3[j] * dk;
    }
    return Vec{d1 - d2, d2 - d3};
  };

  // reverse pass: rates enter the residual with weights (l1, l2-l1, -l2)
  m.jac_theta_transpose_product = [xa, xb](const Vec& u, const Vec& theta, const Vec& l) {
    const Rates r(u, theta, xa, xb);
    double dv1[8], dv2[8], dv3[8];
    r.param_partials(dv1, dv2, dv3);
    const double w1 = l[0], w2 = l[1] - l[0], w3 = -l[1];
    Vec out(kPathwayParams);
    for (std::size_t j = 0; j < kPathwayParams; ++j)
      out[j] = r.k[j] * (w1 * dv1[j] + w2 * dv2[j] + w3 * dv3[j]);
    return out;
  };

  const Vec loc = cfg.prior_loc;
  const Vec scale = cfg.prior_scale;
  const double sobs = cfg.sigma_obs;
  m.log_density = [data, loc, scale, sobs](const Vec& theta, const Vec& u) {
    double lp = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) lp += log_normal_pdf(data[i], u[i], sobs);
    for (std::size_t j = 0; j < theta.size(); ++j)
      lp += log_normal_pdf(theta[j], loc[j], scale[j]);
    return lp;
  };
  m.dlogp_dx = [data, sobs](const Vec&, const Vec& u) {
    Vec g(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) g[i] = (data[i] - u[i]) / (sobs * sobs);
    return g;
  };
  m.dlogp_dtheta = [loc, scale](const Vec& theta, const Vec&) {
    Vec g(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j)
      g[j] = (loc[j] - theta[j]) / (scale[j] * scale[j]);
    return g;
  };

  // default guess: steady state at the prior location, solved tightly once
  m.default_guess = Vec(2, 0.0);
  {
    SolverConfig tight{1e-12, 200, 1.0 / 256.0};
    const auto [root, st] = newton_solve(
        [&](const Vec& u) { return m.residual(u, loc); },
        [&](const Vec& u) { return m.jac_x(u, loc); }, Vec(2, 0.0), tight);
    if (st.converged) m.default_guess = root;
  }
  return m;
}

}  // namespace grapevine
