#ifndef GRAPEVINE_TESTFUNCTIONS_HPP
#define GRAPEVINE_TESTFUNCTIONS_HPP

#include <functional>
#include <string>

#include "grapevine/model.hpp"

namespace grapevine {

// Optimisation test function turned into a root-finding family: the
// residual is the gradient of g evaluated at y + theta, its jacobian the
// Hessian, and the known minimiser doubles as the default guess.
struct TestFunctionDef {
  std::string name;
  std::size_t dim = 0;
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;
  Vec known_root;
};

TestFunctionDef easom();
TestFunctionDef levy(std::size_t dim);
TestFunctionDef beale();
TestFunctionDef rastrigin(std::size_t dim);
TestFunctionDef rosenbrock(std::size_t dim);
TestFunctionDef styblinski_tang(std::size_t dim);

// Gaussian likelihood on the root, Gaussian prior on theta:
//   f(x, theta) = grad g(x + theta),  x*(theta) near known_root - theta
//   y_i ~ Normal(x*_i, sigma_y),  theta_i ~ Normal(0, sigma_theta)
ModelSpec make_testfn_model(const TestFunctionDef& def, double sigma_theta, double sigma_y,
                            const Vec& data, const SolverConfig& solver_cfg = {});

double log_normal_pdf(double y, double mu, double sigma);

}  // namespace grapevine

#endif
