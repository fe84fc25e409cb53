#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "grapevine/grapevine.h"

TEST_CASE("status strings are distinct and non-null") {
  const gv_status codes[] = {GV_OK,
                             GV_ERR_BAD_ARG,
                             GV_ERR_UNKNOWN_MODEL,
                             GV_ERR_UNKNOWN_HEURISTIC,
                             GV_ERR_SIMULATION_FAILED,
                             GV_ERR_INTERNAL};
  std::vector<std::string> seen;
  for (gv_status s : codes) {
    const char* msg = gv_status_string(s);
    REQUIRE(msg != nullptr);
    for (const auto& prev : seen) CHECK(prev != msg);
    seen.push_back(msg);
  }
}

TEST_CASE("registry enumeration matches the benchmark set") {
  REQUIRE(gv_model_count() == 8);
  const char* expected[] = {"easom",       "levy3",       "beale",            "rastrigin3",
                            "rosenbrock3", "rosenbrock8", "styblinski-tang4", "linear-pathway"};
  for (int i = 0; i < 8; ++i) {
    REQUIRE(gv_model_name(i) != nullptr);
    CHECK(std::string(gv_model_name(i)) == expected[i]);
    CHECK(gv_model_exists(expected[i]) == 1);
  }
  CHECK(gv_model_name(-1) == nullptr);
  CHECK(gv_model_name(8) == nullptr);
  CHECK(gv_model_exists("himmelblau") == 0);

  REQUIRE(gv_heuristic_count() == 4);
  const char* hnames[] = {"static", "previous", "implicit", "implicit-cg"};
  for (int i = 0; i < 4; ++i) {
    REQUIRE(gv_heuristic_name(i) != nullptr);
    CHECK(std::string(gv_heuristic_name(i)) == hnames[i]);
    CHECK(gv_heuristic_exists(hnames[i]) == 1);
  }
  CHECK(gv_heuristic_exists("newton") == 0);
  CHECK(gv_heuristic_name(4) == nullptr);
}

TEST_CASE("data seed derivation crosses the boundary unchanged") {
  CHECK(gv_data_seed("easom", 0) == 16814829030486558309ull);
  CHECK(gv_data_seed("easom", 3) == 1130643984296725028ull);
  CHECK(gv_data_seed("linear-pathway", 0) == 15917632444174758730ull);
  CHECK(gv_data_seed("rosenbrock3", 0) == 3893467977744561081ull);
}

TEST_CASE("model lifecycle and error codes") {
  gv_model_options opts;
  gv_model_options_default(&opts);
  CHECK(opts.sigma_theta == 1.0);
  CHECK(opts.solver_maxiter == 100);

  gv_model* m = nullptr;
  CHECK(gv_model_create(nullptr, 0, nullptr, &m) == GV_ERR_BAD_ARG);
  CHECK(gv_model_create("easom", 0, nullptr, nullptr) == GV_ERR_BAD_ARG);
  CHECK(gv_model_create("himmelblau", 0, nullptr, &m) == GV_ERR_UNKNOWN_MODEL);
  CHECK(m == nullptr);

  REQUIRE(gv_model_create("easom", gv_data_seed("easom", 0), nullptr, &m) == GV_OK);
  REQUIRE(m != nullptr);
  CHECK(gv_model_theta_dim(m) == 2);
  CHECK(gv_model_x_dim(m) == 2);
  CHECK(gv_model_solver_tol(m) == 1e-9);
  CHECK(gv_model_solver_maxiter(m) == 100);

  double worst = -1.0;
  REQUIRE(gv_model_self_test(m, 0x5e1f, &worst) == GV_OK);
  CHECK(worst >= 0.0);
  CHECK(worst < 1e-5);
  CHECK(gv_model_self_test(m, 0x5e1f, nullptr) == GV_ERR_BAD_ARG);
  gv_model_destroy(m);
  gv_model_destroy(nullptr);  // must be a no-op

  gv_model* path = nullptr;
  REQUIRE(gv_model_create("linear-pathway", gv_data_seed("linear-pathway", 0), nullptr, &path) ==
          GV_OK);
  CHECK(gv_model_theta_dim(path) == 8);
  CHECK(gv_model_x_dim(path) == 2);
  CHECK(gv_model_solver_tol(path) == 1e-6);
  gv_model_destroy(path);
}

TEST_CASE("sampling run accessors are coherent") {
  gv_model_options mopts;
  gv_model_options_default(&mopts);
  mopts.sigma_theta = 0.03;
  gv_model* m = nullptr;
  REQUIRE(gv_model_create("rosenbrock3", gv_data_seed("rosenbrock3", 0), &mopts, &m) == GV_OK);

  gv_sampler_options sopts;
  gv_sampler_options_default(&sopts);
  sopts.num_warmup = 100;
  sopts.num_samples = 150;
  sopts.seed = 1;
  sopts.heuristic = "implicit";

  gv_run* r = nullptr;
  CHECK(gv_sample_run(m, &sopts, 0, &r) == GV_ERR_BAD_ARG);
  sopts.heuristic = "downhill";
  CHECK(gv_sample_run(m, &sopts, 2, &r) == GV_ERR_UNKNOWN_HEURISTIC);
  sopts.heuristic = "implicit";
  REQUIRE(gv_sample_run(m, &sopts, 2, &r) == GV_OK);
  REQUIRE(r != nullptr);

  CHECK(gv_run_num_chains(r) == 2);
  CHECK(gv_run_num_samples(r) == 150);
  CHECK(gv_run_dim(r) == 3);
  CHECK(gv_run_leapfrogs(r) > 0);
  CHECK(gv_run_newton_steps(r) > 0);
  CHECK(gv_run_step_size(r) > 0.0);
  CHECK(gv_run_accept_mean(r) > 0.0);
  CHECK(gv_run_accept_mean(r) <= 1.0);

  std::vector<double> draws(150 * 3, 0.0);
  CHECK(gv_run_draws(r, -1, draws.data()) == GV_ERR_BAD_ARG);
  CHECK(gv_run_draws(r, 2, draws.data()) == GV_ERR_BAD_ARG);
  CHECK(gv_run_draws(r, 0, nullptr) == GV_ERR_BAD_ARG);
  REQUIRE(gv_run_draws(r, 0, draws.data()) == GV_OK);
  for (double v : draws) CHECK(std::isfinite(v));

  std::vector<double> e(3, -1.0), rh(3, -1.0);
  REQUIRE(gv_run_ess(r, e.data()) == GV_OK);
  REQUIRE(gv_run_rhat(r, rh.data()) == GV_OK);
  double emin = e[0], rmax = rh[0];
  for (int i = 1; i < 3; ++i) {
    emin = std::min(emin, e[i]);
    rmax = std::max(rmax, rh[i]);
  }
  CHECK(gv_run_ess_min(r) == emin);
  CHECK(gv_run_rhat_max(r) == rmax);

  const bool expect_passed = gv_run_divergences(r) == 0 && gv_run_solver_failures(r) == 0 &&
                             emin >= 0.1 * 2.0 * 150.0 && rmax < 1.01;
  CHECK(gv_run_passed(r) == (expect_passed ? 1 : 0));

  gv_run_destroy(r);
  gv_run_destroy(nullptr);
  gv_model_destroy(m);
}

TEST_CASE("sampling through the c boundary is deterministic") {
  gv_model* m = nullptr;
  REQUIRE(gv_model_create("beale", gv_data_seed("beale", 2), nullptr, &m) == GV_OK);

  gv_sampler_options sopts;
  gv_sampler_options_default(&sopts);
  sopts.num_warmup = 50;
  sopts.num_samples = 80;
  sopts.seed = 5;

  const int dim = gv_model_theta_dim(m);
  std::vector<double> first(80 * dim), second(80 * dim);
  for (auto* buf : {&first, &second}) {
    gv_run* r = nullptr;
    REQUIRE(gv_sample_run(m, &sopts, 1, &r) == GV_OK);
    REQUIRE(gv_run_draws(r, 0, buf->data()) == GV_OK);
    gv_run_destroy(r);
  }
  CHECK(first == second);
  gv_model_destroy(m);
}

TEST_CASE("trajectory demo records every heuristic over the same path") {
  gv_model_options mopts;
  gv_model_options_default(&mopts);
  mopts.sigma_theta = 0.03;
  gv_model* m = nullptr;
  REQUIRE(gv_model_create("rosenbrock3", gv_data_seed("rosenbrock3", 0), &mopts, &m) == GV_OK);

  gv_trajectory* t = nullptr;
  CHECK(gv_trajectory_create(m, 2, -1, 0.0, &t) == GV_ERR_BAD_ARG);
  REQUIRE(gv_trajectory_create(m, 2, 5, 0.0, &t) == GV_OK);
  REQUIRE(t != nullptr);

  // step 0 is the start solve, so each heuristic contributes n_steps + 1 rows
  CHECK(gv_trajectory_num_records(t) == 4 * 6);
  CHECK(gv_trajectory_eps(t) > 0.0);

  int theta_dim = 0, x_dim = 0;
  REQUIRE(gv_trajectory_dims(t, &theta_dim, &x_dim) == GV_OK);
  CHECK(theta_dim == 3);
  CHECK(x_dim == 3);

  std::vector<double> theta(theta_dim), root(x_dim), guess(x_dim);
  int step = -1, iters = -1;
  const char* hname = nullptr;
  CHECK(gv_trajectory_record(t, -1, &step, &hname, &iters, theta.data(), root.data(),
                             guess.data()) == GV_ERR_BAD_ARG);
  CHECK(gv_trajectory_record(t, 24, &step, &hname, &iters, theta.data(), root.data(),
                             guess.data()) == GV_ERR_BAD_ARG);

  // heuristic-major layout; all four blocks share the step-0 start solve
  int prev_step = -1;
  for (int i = 0; i < 6; ++i) {
    REQUIRE(gv_trajectory_record(t, i, &step, &hname, &iters, theta.data(), root.data(),
                                 guess.data()) == GV_OK);
    CHECK(step == i);
    CHECK(step > prev_step);
    prev_step = step;
    REQUIRE(hname != nullptr);
    CHECK(std::string(hname) == "static");
    CHECK(iters >= 0);
    for (double v : theta) CHECK(std::isfinite(v));
    for (double v : root) CHECK(std::isfinite(v));
  }
  REQUIRE(gv_trajectory_record(t, 6, &step, &hname, &iters, nullptr, nullptr, nullptr) == GV_OK);
  CHECK(std::string(hname) == "previous");
  CHECK(step == 0);

  // the replayed parameter path is identical across heuristics
  std::vector<double> theta_static(theta_dim), theta_other(theta_dim);
  for (int k = 1; k < 4; ++k)
    for (int i = 0; i < 6; ++i) {
      REQUIRE(gv_trajectory_record(t, i, nullptr, nullptr, nullptr, theta_static.data(), nullptr,
                                   nullptr) == GV_OK);
      REQUIRE(gv_trajectory_record(t, 6 * k + i, nullptr, nullptr, nullptr, theta_other.data(),
                                   nullptr, nullptr) == GV_OK);
      CHECK(theta_static == theta_other);
    }

  gv_trajectory_destroy(t);
  gv_trajectory_destroy(nullptr);
  gv_model_destroy(m);
}
