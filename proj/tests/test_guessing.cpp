#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "grapevine/guessing.hpp"
#include "grapevine/model.hpp"
#include "grapevine/pathway.hpp"
#include "grapevine/rootfind.hpp"
#include "grapevine/testfunctions.hpp"

using namespace grapevine;

namespace {

Vec tight_root(const ModelSpec& m, const Vec& theta, const Vec& guess) {
  SolverConfig cfg = m.solver_cfg;
  cfg.tol = 1e-13;
  cfg.maxiter = 200;
  const auto [x, st] = newton_solve(
      [&](const Vec& u) { return m.residual(u, theta); },
      [&](const Vec& u) { return m.jac_x(u, theta); }, guess, cfg);
  REQUIRE(st.converged);
  return x;
}

}  // namespace

TEST_CASE("heuristic names round-trip") {
  CHECK(heuristic_name(Heuristic::Static) == std::string("static"));
  CHECK(heuristic_name(Heuristic::Previous) == std::string("previous"));
  CHECK(heuristic_name(Heuristic::ImplicitDirect) == std::string("implicit"));
  CHECK(heuristic_name(Heuristic::ImplicitMatFree) == std::string("implicit-cg"));
  for (Heuristic h : kAllHeuristics) {
    const auto parsed = parse_heuristic(heuristic_name(h));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == h);
  }
  CHECK_FALSE(parse_heuristic("implict").has_value());
  CHECK_FALSE(parse_heuristic("").has_value());
}

TEST_CASE("static and previous guesses") {
  const Vec def{3.0, 0.5};
  GuessInfo none;
  GuessInfo some{{1.0, 2.0}, {0.1, 0.2}, true};

  CHECK(guess_static(def, none) == def);
  CHECK(guess_static(def, some) == def);
  CHECK(guess_previous(def, none) == def);
  CHECK(guess_previous(def, some) == some.x_prev);
}

TEST_CASE("invalid info sends implicit straight to the default, not a fallback") {
  const auto def = beale();
  ModelSpec m = make_testfn_model(def, 1.0, 0.05, Vec{3.0, 0.5});
  GuessInfo none;
  const GuessOutcome g = make_guess(Heuristic::ImplicitDirect, m.default_guess, none,
                                    Vec{0.1, -0.1}, m);
  CHECK(g.guess == m.default_guess);
  CHECK_FALSE(g.fell_back);
}

TEST_CASE("implicit extrapolation is exact for the affine root map") {
  // for the test-function family x*(theta) = c - theta, so the first-order
  // extrapolation has zero truncation error
  const auto def = beale();
  ModelSpec m = make_testfn_model(def, 1.0, 0.05, Vec{3.0, 0.5});

  const Vec theta0{0.04, -0.03};
  const Vec x0 = tight_root(m, theta0, m.default_guess);
  GuessInfo info{x0, theta0, true};

  const Vec theta1{-0.06, 0.08};
  for (Heuristic h : {Heuristic::ImplicitDirect, Heuristic::ImplicitMatFree}) {
    const GuessOutcome g = make_guess(h, m.default_guess, info, theta1, m);
    CHECK_FALSE(g.fell_back);
    const Vec expect{def.known_root[0] - theta1[0], def.known_root[1] - theta1[1]};
    CHECK(norm2(sub(g.guess, expect)) < 1e-7);  // limited by x0's solve accuracy
  }
}

TEST_CASE("implicit guess error is second order, previous is first order") {
  // on the pathway model the root map is genuinely nonlinear; regressing
  // log error on log step width must give slope ~2 (implicit) and ~1
  // (previous)
  PathwayConfig pc;
  ModelSpec m = make_pathway_model(pc, Vec{std::log(4.28), std::log(0.28)});

  const Vec theta0(kPathwayParams, 0.0);
  const Vec x0 = tight_root(m, theta0, m.default_guess);
  const GuessInfo info{x0, theta0, true};

  // fixed direction spreading over every parameter
  Vec dir{0.9, -0.7, 0.55, -0.4, 0.8, -0.6, 0.35, -0.5};

  double lg_h[4], lg_impl[4], lg_prev[4];
  const double scales[4] = {1e-1, 1e-2, 1e-3, 1e-4};
  for (int i = 0; i < 4; ++i) {
    Vec theta1 = theta0;
    for (std::size_t j = 0; j < kPathwayParams; ++j) theta1[j] += scales[i] * dir[j];
    const Vec xstar = tight_root(m, theta1, x0);
    const GuessOutcome g = make_guess(Heuristic::ImplicitDirect, m.default_guess, info, theta1, m);
    REQUIRE_FALSE(g.fell_back);
    lg_h[i] = std::log(scales[i]);
    lg_impl[i] = std::log(norm2(sub(g.guess, xstar)));
    lg_prev[i] = std::log(norm2(sub(x0, xstar)));
  }

  auto slope = [](const double* xs, const double* ys) {
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < 4; ++i) { mx += xs[i]; my += ys[i]; }
    mx /= 4.0; my /= 4.0;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 4; ++i) {
      num += (xs[i] - mx) * (ys[i] - my);
      den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
  };
  CHECK(slope(lg_h, lg_impl) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(slope(lg_h, lg_prev) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("cg and dense implicit guesses agree on a symmetric jacobian") {
  // cg needs the embedded jacobian to be SPD, which holds for the
  // test-function family (it is a Hessian at a minimum)
  ModelSpec m = make_testfn_model(rosenbrock(3), 1.0, 0.05, Vec{1.0, 1.0, 1.0});
  const Vec theta0{0.02, -0.01, 0.03};
  const Vec x0 = tight_root(m, theta0, m.default_guess);
  const GuessInfo info{x0, theta0, true};

  const Vec theta1{-0.04, 0.02, 0.01};
  const GuessOutcome direct = make_guess(Heuristic::ImplicitDirect, m.default_guess, info,
                                         theta1, m);
  const GuessOutcome matfree = make_guess(Heuristic::ImplicitMatFree, m.default_guess, info,
                                          theta1, m);
  REQUIRE_FALSE(direct.fell_back);
  REQUIRE_FALSE(matfree.fell_back);
  CHECK(norm2(sub(direct.guess, matfree.guess)) < 1e-6);
}

TEST_CASE("cg falls back on the pathway's nonsymmetric jacobian") {
  // the log-space pathway jacobian is not symmetric, so the matrix-free
  // variant cannot run plain cg on it; the documented behavior is a clean
  // fallback to the previous root
  PathwayConfig pc;
  ModelSpec m = make_pathway_model(pc, Vec{1.0, 0.0});
  const Vec theta0(kPathwayParams, 0.0);
  const Vec x0 = tight_root(m, theta0, m.default_guess);
  const GuessInfo info{x0, theta0, true};

  Vec theta1 = theta0;
  theta1[2] += 0.05;
  const GuessOutcome g = make_guess(Heuristic::ImplicitMatFree, m.default_guess, info, theta1, m);
  CHECK(g.fell_back);
  CHECK(g.guess == x0);
}

TEST_CASE("implicit falls back to previous on a singular jacobian") {
  ModelSpec m;
  m.theta_dim = 2;
  m.x_dim = 2;
  m.default_guess = {9.0, 9.0};
  m.jac_x = [](const Vec&, const Vec&) { return Mat(2, 2); };  // all zero
  m.jac_theta_product = [](const Vec&, const Vec&, const Vec& v) { return v; };

  const GuessInfo info{{1.0, 2.0}, {0.0, 0.0}, true};
  const GuessOutcome g = make_guess(Heuristic::ImplicitDirect, m.default_guess, info,
                                    Vec{0.1, 0.1}, m);
  CHECK(g.fell_back);
  CHECK(g.guess == info.x_prev);  // previous, not default
}

TEST_CASE("implicit-cg falls back when the operator is not SPD") {
  ModelSpec m;
  m.theta_dim = 2;
  m.x_dim = 2;
  m.default_guess = {9.0, 9.0};
  m.jac_x = [](const Vec&, const Vec&) {
    Mat j(2, 2);
    j(0, 0) = 1.0;
    j(1, 1) = -1.0;  // indefinite: CG's p.Ap goes nonpositive
    return j;
  };
  m.jac_theta_product = [](const Vec&, const Vec&, const Vec& v) { return Vec{v[0], v[1]}; };

  const GuessInfo info{{1.0, 2.0}, {0.0, 0.0}, true};
  const GuessOutcome g = make_guess(Heuristic::ImplicitMatFree, m.default_guess, info,
                                    Vec{0.5, 0.5}, m);
  CHECK(g.fell_back);
  CHECK(g.guess == info.x_prev);
}
