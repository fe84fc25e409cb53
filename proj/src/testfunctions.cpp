#include "grapevine/testfunctions.hpp"

#include <cmath>

namespace grapevine {

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;
}  // namespace

double log_normal_pdf(double y, double mu, double sigma) {
  const double z = (y - mu) / sigma;
  return -0.5 * z * z - std::log(sigma) - kLogSqrt2Pi;
}

TestFunctionDef easom() {
  TestFunctionDef def;
  def.name = "easom";
  def.dim = 2;
  def.known_root = {kPi, kPi};
  // g = -cos(x) cos(y) exp(-((x-pi)^2 + (y-pi)^2))
  def.grad = [](const Vec& p) {
    const double dx = p[0] - kPi, dy = p[1] - kPi;
    const double c = std::cos(p[0]), s = std::sin(p[0]);
    const double C = std::cos(p[1]), S = std::sin(p[1]);
    const double E = std::exp(-(dx * dx + dy * dy));
    return Vec{E * (s * C + 2.0 * dx * c * C), E * (c * S + 2.0 * dy * c * C)};
  };
  def.hess = [](const Vec& p) {
    const double dx = p[0] - kPi, dy = p[1] - kPi;
    const double c = std::cos(p[0]), s = std::sin(p[0]);
    const double C = std::cos(p[1]), S = std::sin(p[1]);
    const double E = std::exp(-(dx * dx + dy * dy));
    Mat h(2, 2);
    h(0, 0) = E * (3.0 * c * C - 4.0 * dx * s * C - 4.0 * dx * dx * c * C);
    h(1, 1) = E * (3.0 * c * C - 4.0 * dy * c * S - 4.0 * dy * dy * c * C);
    h(0, 1) = E * (-s * S - 2.0 * dx * c * S - 2.0 * dy * s * C - 4.0 * dx * dy * c * C);
    h(1, 0) = h(0, 1);
    return h;
  };
  return def;
}

namespace {

// per-coordinate pieces of the Levy function in w = 1 + (x-1)/4
double levy_head_d1(double w) { return kPi * std::sin(kTwoPi * w); }
double levy_head_d2(double w) { return 2.0 * kPi * kPi * std::cos(kTwoPi * w); }

double levy_mid_d1(double w) {
  const double q = kPi * w + 1.0;
  const double sq = std::sin(q);
  return 2.0 * (w - 1.0) * (1.0 + 10.0 * sq * sq) +
         10.0 * kPi * (w - 1.0) * (w - 1.0) * std::sin(2.0 * q);
}
double levy_mid_d2(double w) {
  const double q = kPi * w + 1.0;
  const double sq = std::sin(q);
  return 2.0 * (1.0 + 10.0 * sq * sq) + 40.0 * kPi * (w - 1.0) * std::sin(2.0 * q) +
         20.0 * kPi * kPi * (w - 1.0) * (w - 1.0) * std::cos(2.0 * q);
}

double levy_tail_d1(double w) {
  const double r = kTwoPi * w;
  const double sr = std::sin(r);
  return 2.0 * (w - 1.0) * (1.0 + sr * sr) +
         2.0 * kPi * (w - 1.0) * (w - 1.0) * std::sin(2.0 * r);
}
double levy_tail_d2(double w) {
  const double r = kTwoPi * w;
  const double sr = std::sin(r);
  return 2.0 * (1.0 + sr * sr) + 8.0 * kPi * (w - 1.0) * std::sin(2.0 * r) +
         8.0 * kPi * kPi * (w - 1.0) * (w - 1.0) * std::cos(2.0 * r);
}

}  // namespace

TestFunctionDef levy(std::size_t dim) {
  TestFunctionDef def;
  def.name = "levy" + std::to_string(dim);
  def.dim = dim;
  def.known_root = Vec(dim, 1.0);
  def.grad = [dim](const Vec& p) {
    Vec g(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      const double w = 1.0 + (p[i] - 1.0) / 4.0;
      double dw = 0.0;
      if (i == 0) dw += levy_head_d1(w);
      if (i + 1 < dim) dw += levy_mid_d1(w);
      if (i + 1 == dim) dw += levy_tail_d1(w);
      g[i] = dw / 4.0;
    }
    return g;
  };
  def.hess = [dim](const Vec& p) {
    Mat h(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const double w = 1.0 + (p[i] - 1.0) / 4.0;
      double dw2 = 0.0;
      if (i == 0) dw2 += levy_head_d2(w);
      if (i + 1 < dim) dw2 += levy_mid_d2(w);
      if (i + 1 == dim) dw2 += levy_tail_d2(w);
      h(i, i) = dw2 / 16.0;
    }
    return h;
  };
  return def;
}

TestFunctionDef beale() {
  TestFunctionDef def;
  def.name = "beale";
  def.dim = 2;
  def.known_root = {3.0, 0.5};
  constexpr double b[3] = {1.5, 2.25, 2.625};
  // g = sum_k (b_k - x + x y^k)^2
  def.grad = [b](const Vec& p) {
    const double x = p[0], y = p[1];
    double gx = 0.0, gy = 0.0;
    for (int k = 1; k <= 3; ++k) {
      const double yk = std::pow(y, k);
      const double r = b[k - 1] - x + x * yk;
      gx += 2.0 * r * (yk - 1.0);
      gy += 2.0 * r * k * x * std::pow(y, k - 1);
    }
    return Vec{gx, gy};
  };
  def.hess = [b](const Vec& p) {
    const double x = p[0], y = p[1];
    Mat h(2, 2);
    for (int k = 1; k <= 3; ++k) {
      const double yk = std::pow(y, k);
      const double ykm1 = std::pow(y, k - 1);
      const double r = b[k - 1] - x + x * yk;
      h(0, 0) += 2.0 * (yk - 1.0) * (yk - 1.0);
      h(0, 1) += 2.0 * (k * x * ykm1 * (yk - 1.0) + r * k * ykm1);
      h(1, 1) += 2.0 * (k * x * ykm1 * k * x * ykm1 +
                        (k > 1 ? r * k * (k - 1) * x * std::pow(y, k - 2) : 0.0));
    }
    h(1, 0) = h(0, 1);
    return h;
  };
  return def;
}

TestFunctionDef rastrigin(std::size_t dim) {
  TestFunctionDef def;
  def.name = "rastrigin" + std::to_string(dim);
  def.dim = dim;
  def.known_root = Vec(dim, 0.0);
  // g = 10 d + sum (t^2 - 10 cos(2 pi t))
  def.grad = [dim](const Vec& p) {
    Vec g(dim);
    for (std::size_t i = 0; i < dim; ++i)
      g[i] = 2.0 * p[i] + 20.0 * kPi * std::sin(kTwoPi * p[i]);
    return g;
  };
  def.hess = [dim](const Vec& p) {
    Mat h(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      h(i, i) = 2.0 + 40.0 * kPi * kPi * std::cos(kTwoPi * p[i]);
    return h;
  };
  return def;
}

TestFunctionDef rosenbrock(std::size_t dim) {
  TestFunctionDef def;
  def.name = "rosenbrock" + std::to_string(dim);
  def.dim = dim;
  def.known_root = Vec(dim, 1.0);
  // g = sum_{i<dim-1} 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2
  def.grad = [dim](const Vec& p) {
    Vec g(dim, 0.0);
    for (std::size_t i = 0; i + 1 < dim; ++i) {
      const double t = p[i + 1] - p[i] * p[i];
      g[i] += -400.0 * p[i] * t - 2.0 * (1.0 - p[i]);
      g[i + 1] += 200.0 * t;
    }
    return g;
  };
  def.hess = [dim](const Vec& p) {
    Mat h(dim, dim);
    for (std::size_t i = 0; i + 1 < dim; ++i) {
      h(i, i) += 1200.0 * p[i] * p[i] - 400.0 * p[i + 1] + 2.0;
      h(i + 1, i + 1) += 200.0;
      h(i, i + 1) += -400.0 * p[i];
      h(i + 1, i) += -400.0 * p[i];
    }
    return h;
  };
  return def;
}

TestFunctionDef styblinski_tang(std::size_t dim) {
  TestFunctionDef def;
  def.name = "styblinski-tang" + std::to_string(dim);
  def.dim = dim;
  // stationary point of (t^4 - 16 t^2 + 5 t)/2, most negative branch
  def.known_root = Vec(dim, -2.903534027771177);
  def.grad = [dim](const Vec& p) {
    Vec g(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const double t = p[i];
      g[i] = 2.0 * t * t * t - 16.0 * t + 2.5;
    }
    return g;
  };
  def.hess = [dim](const Vec& p) {
    Mat h(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) h(i, i) = 6.0 * p[i] * p[i] - 16.0;
    return h;
  };
  return def;
}

ModelSpec make_testfn_model(const TestFunctionDef& def, double sigma_theta, double sigma_y,
                            const Vec& data, const SolverConfig& solver_cfg) {
  ModelSpec m;
  m.theta_dim = def.dim;
  m.x_dim = def.dim;
  m.default_guess = def.known_root;
  m.solver_cfg = solver_cfg;

  const auto grad = def.grad;
  const auto hess = def.hess;
  m.residual = [grad](const Vec& x, const Vec& theta) { return grad(add(x, theta)); };
  m.jac_x = [hess](const Vec& x, const Vec& theta) { return hess(add(x, theta)); };
  // the parameter jacobian coincides with the state jacobian for this family
  m.jac_theta_product = [hess](const Vec& x, const Vec& theta, const Vec& v) {
    return hess(add(x, theta)).apply(v);
  };
  m.jac_theta_transpose_product = [hess](const Vec& x, const Vec& theta, const Vec& w) {
    return hess(add(x, theta)).apply_transpose(w);
  };

  m.log_density = [data, sigma_y, sigma_theta](const Vec& theta, const Vec& x) {
    double lp = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) lp += log_normal_pdf(data[i], x[i], sigma_y);
    for (double t : theta) lp += log_normal_pdf(t, 0.0, sigma_theta);
    return lp;
  };
  m.dlogp_dx = [data, sigma_y](const Vec&, const Vec& x) {
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = (data[i] - x[i]) / (sigma_y * sigma_y);
    return g;
  };
  m.dlogp_dtheta = [sigma_theta](const Vec& theta, const Vec&) {
    Vec g(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i)
      g[i] = -theta[i] / (sigma_theta * sigma_theta);
    return g;
  };
  return m;
}

}  // namespace grapevine
