#include "grapevine/registry.hpp"

#include <cmath>

#include "grapevine/pathway.hpp"
#include "grapevine/testfunctions.hpp"

namespace grapevine {

namespace {

constexpr double kTestFnTol = 1e-9;
constexpr double kPathwayTol = 1e-6;

std::optional<TestFunctionDef> testfn_by_name(std::string_view name) {
  if (name == "easom") return easom();
  if (name == "levy3") return levy(3);
  if (name == "beale") return beale();
  if (name == "rastrigin3") return rastrigin(3);
  if (name == "rosenbrock3") return rosenbrock(3);
  if (name == "rosenbrock8") return rosenbrock(8);
  if (name == "styblinski-tang4") return styblinski_tang(4);
  return std::nullopt;
}

// solve the embedded problem tightly at theta_true and observe the root
std::optional<SimulatedDataset> simulate_once(const ModelSpec& spec, const Vec& theta_true,
                                              double noise_sd, Rng& rng) {
  SolverConfig tight{1e-12, 200, 1.0 / 256.0};
  const auto [root, st] = newton_solve(
      [&](const Vec& x) { return spec.residual(x, theta_true); },
      [&](const Vec& x) { return spec.jac_x(x, theta_true); }, spec.default_guess, tight);
  if (!st.converged) return std::nullopt;
  SimulatedDataset ds;
  ds.theta_true = theta_true;
  ds.noise_sd = noise_sd;
  ds.observations = root;
  for (auto& y : ds.observations) y += noise_sd * rng.normal();
  return ds;
}

}  // namespace

const std::vector<std::string>& registry_names() {
  static const std::vector<std::string> names = {
      "easom",       "levy3",       "beale",            "rastrigin3",
      "rosenbrock3", "rosenbrock8", "styblinski-tang4", "linear-pathway"};
  return names;
}

bool is_registered_model(std::string_view name) {
  for (const auto& n : registry_names())
    if (n == name) return true;
  return false;
}

std::uint64_t derive_data_seed(std::string_view name, std::uint64_t run_seed) {
  return hash64(std::string(name).c_str()) ^ (0x9e3779b97f4a7c15ull * (run_seed + 1));
}

std::optional<SimulatedDataset> simulate_dataset(std::string_view name, std::uint64_t seed,
                                                 const ModelOptions& opts) {
  if (!is_registered_model(name)) return std::nullopt;
  const bool pathway = (name == "linear-pathway");

  PathwayConfig pcfg;
  ModelSpec probe_spec;  // spec with placeholder data, used only for solving
  std::size_t theta_dim;
  if (pathway) {
    pcfg.sigma_obs = opts.sigma_y;
    probe_spec = make_pathway_model(pcfg, Vec(2, 0.0));
    theta_dim = kPathwayParams;
  } else {
    const auto def = testfn_by_name(name);
    probe_spec = make_testfn_model(*def, opts.sigma_theta, std::max(opts.sigma_y, 1e-12),
                                   Vec(def->dim, 0.0));
    theta_dim = def->dim;
  }

  for (std::uint64_t attempt = 0; attempt < 10; ++attempt) {
    Rng rng(seed + attempt, 0xD474);
    Vec theta_true(theta_dim);
    if (pathway) {
      for (std::size_t j = 0; j < theta_dim; ++j)
        theta_true[j] = pcfg.prior_loc[j] + pcfg.prior_scale[j] * rng.normal();
    } else {
      for (auto& t : theta_true) t = opts.sigma_theta * rng.normal();
    }
    if (auto ds = simulate_once(probe_spec, theta_true, opts.sigma_y, rng)) return ds;
  }
  return std::nullopt;
}

std::optional<BuiltModel> build_model(std::string_view name, std::uint64_t data_seed,
                                      const ModelOptions& opts) {
  if (!is_registered_model(name)) return std::nullopt;
  auto ds = simulate_dataset(name, data_seed, opts);
  if (!ds) return std::nullopt;

  BuiltModel bm;
  bm.name = std::string(name);
  bm.dataset = *ds;

  const bool pathway = (name == "linear-pathway");
  SolverConfig scfg;
  scfg.tol = opts.solver_tol > 0.0 ? opts.solver_tol : (pathway ? kPathwayTol : kTestFnTol);
  scfg.maxiter = opts.solver_maxiter;

  if (pathway) {
    PathwayConfig pcfg;
    pcfg.sigma_obs = opts.sigma_y;
    bm.spec = make_pathway_model(pcfg, ds->observations, scfg);
    bm.prior_draw = [pcfg](Rng& rng) {
      Vec t(kPathwayParams);
      for (std::size_t j = 0; j < kPathwayParams; ++j)
        t[j] = pcfg.prior_loc[j] + pcfg.prior_scale[j] * rng.normal();
      return t;
    };
  } else {
    const auto def = testfn_by_name(name);
    bm.spec = make_testfn_model(*def, opts.sigma_theta, opts.sigma_y, ds->observations, scfg);
    const double st = opts.sigma_theta;
    const std::size_t dim = def->dim;
    bm.prior_draw = [st, dim](Rng& rng) {
      Vec t(dim);
      for (auto& c : t) c = st * rng.normal();
      return t;
    };
  }
  bm.solver_tol = scfg.tol;
  bm.solver_maxiter = scfg.maxiter;
  return bm;
}

}  // namespace grapevine
