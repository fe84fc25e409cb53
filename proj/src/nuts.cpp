#include "grapevine/nuts.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "grapevine/rng.hpp"

namespace grapevine {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDivergenceCap = 1000.0;

double logsumexp2(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// Everything one chain accumulates, plus the RNG it owns.
struct Ctx {
  const ModelSpec& model;
  const SamplerConfig& cfg;
  Rng rng;
  double eps = 0.1;
  Vec inv_mass;  // empty = identity

  std::uint64_t newton = 0;
  std::uint64_t fallbacks = 0;
  std::uint64_t failures = 0;
  std::uint64_t leapfrogs = 0;

  Ctx(const ModelSpec& m, const SamplerConfig& c, std::uint64_t stream)
      : model(m), cfg(c), rng(c.seed, stream) {}

  void absorb(const SolverStats& s, bool is_leapfrog) {
    newton += static_cast<std::uint64_t>(s.iterations);
    fallbacks += static_cast<std::uint64_t>(s.fallbacks);
    if (!s.converged) ++failures;
    if (is_leapfrog) ++leapfrogs;
  }

  Vec draw_momentum() {
    Vec p(model.theta_dim);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double z = rng.normal();
      p[i] = inv_mass.empty() ? z : z / std::sqrt(inv_mass[i]);
    }
    return p;
  }
};

// Endpoints are in build order: `first` is the leaf next to the state the
// subtree grew from, `last` is the frontier for further doubling.
struct Tree {
  IntegratorState first;
  IntegratorState last;
  Vec proposal;
  double log_weight = -kInf;
  bool ok = false;
};

bool uturn(const IntegratorState& a, const IntegratorState& b, double sign, const Vec& inv_mass) {
  double da = 0.0, db = 0.0;
  for (std::size_t i = 0; i < a.theta.size(); ++i) {
    const double delta = sign * (b.theta[i] - a.theta[i]);
    const double im = inv_mass.empty() ? 1.0 : inv_mass[i];
    da += im * a.momentum[i] * delta;
    db += im * b.momentum[i] * delta;
  }
  return da < 0.0 || db < 0.0;
}

struct IterScratch {
  double sum_metro = 0.0;
  int n_leaf = 0;
  bool divergent = false;
};

Tree build_tree(Ctx& ctx, const IntegratorState& from, int depth, double sign, double h0,
                IterScratch& sc) {
  if (depth == 0) {
    StepOutcome out = leapfrog_step_ex(ctx.model, from, sign * ctx.eps, ctx.cfg.heuristic,
                                       ctx.inv_mass);
    ctx.absorb(out.step_stats, true);

    const double dh = hamiltonian(out.state, ctx.inv_mass) - h0;
    double metro;
    if (std::isnan(dh))
      metro = 0.0;
    else
      metro = std::min(1.0, std::exp(-dh));
    sc.sum_metro += metro;
    ++sc.n_leaf;

    Tree t;
    t.first = out.state;
    t.last = std::move(out.state);
    t.proposal = t.last.theta;
    if (!(std::fabs(dh) <= kDivergenceCap)) {
      sc.divergent = true;
      t.ok = false;
      return t;
    }
    t.log_weight = -dh;
    t.ok = true;
    return t;
  }

  Tree inner = build_tree(ctx, from, depth - 1, sign, h0, sc);
  if (!inner.ok) return inner;
  Tree outer = build_tree(ctx, inner.last, depth - 1, sign, h0, sc);

  Tree t;
  t.first = std::move(inner.first);
  t.last = std::move(outer.last);
  t.log_weight = logsumexp2(inner.log_weight, outer.log_weight);
  if (!outer.ok) {
    t.ok = false;
    return t;
  }
  // multinomial draw between the two halves, proportional to their weights
  const double p_outer = std::exp(outer.log_weight - t.log_weight);
  t.proposal = (ctx.rng.uniform() < p_outer) ? std::move(outer.proposal) : std::move(inner.proposal);
  t.ok = !uturn(t.first, t.last, sign, ctx.inv_mass);
  return t;
}

struct IterResult {
  Vec theta;
  double accept_stat = 0.0;
  bool divergent = false;
};

IterResult nuts_iter(Ctx& ctx, const Vec& theta) {
  const Vec p0 = ctx.draw_momentum();
  IntegratorState init = init_trajectory(ctx.model, theta, p0, ctx.cfg.heuristic);
  ctx.absorb(init.cum_stats, false);
  const double h0 = hamiltonian(init, ctx.inv_mass);

  IterScratch sc;
  IntegratorState left = init;    // backward end of the trajectory
  IntegratorState right = init;   // forward end
  Vec proposal = theta;
  double total_lw = 0.0;  // the initial point has relative weight exp(0)

  const int n_doublings = std::max(1, ctx.cfg.max_tree_depth);
  for (int j = 0; j < n_doublings; ++j) {
    const double sign = ctx.rng.uniform() < 0.5 ? -1.0 : 1.0;
    Tree sub = sign > 0.0 ? build_tree(ctx, right, j, sign, h0, sc)
                          : build_tree(ctx, left, j, sign, h0, sc);
    if (!sub.ok) break;  // divergent or self-terminating subtree: discard it

    // biased progressive sampling favours the fresh half of the trajectory
    if (ctx.rng.uniform() < std::exp(sub.log_weight - total_lw)) proposal = std::move(sub.proposal);
    total_lw = logsumexp2(total_lw, sub.log_weight);
    if (sign > 0.0)
      right = std::move(sub.last);
    else
      left = std::move(sub.last);
    if (uturn(left, right, 1.0, ctx.inv_mass)) break;
  }

  IterResult r;
  r.theta = std::move(proposal);
  r.accept_stat = sc.n_leaf > 0 ? sc.sum_metro / sc.n_leaf : 0.0;
  r.divergent = sc.divergent;
  return r;
}

// Doubling / halving search for a step size whose one-step acceptance
// straddles 1/2.
double find_reasonable_epsilon(Ctx& ctx, const Vec& theta) {
  double eps = ctx.cfg.init_step_size > 0.0 ? ctx.cfg.init_step_size : 0.1;
  const Vec p0 = ctx.draw_momentum();
  IntegratorState init = init_trajectory(ctx.model, theta, p0, ctx.cfg.heuristic);
  ctx.absorb(init.cum_stats, false);
  const double h0 = hamiltonian(init, ctx.inv_mass);
  if (!std::isfinite(h0)) return eps;

  const double log_half = std::log(0.5);
  auto accept_logp = [&](double e) {
    StepOutcome out = leapfrog_step_ex(ctx.model, init, e, ctx.cfg.heuristic, ctx.inv_mass);
    ctx.absorb(out.step_stats, true);
    const double dh = hamiltonian(out.state, ctx.inv_mass) - h0;
    return std::isnan(dh) ? -kInf : -dh;
  };

  double alp = accept_logp(eps);
  const double dir = alp > log_half ? 1.0 : -1.0;
  for (int it = 0; it < 50; ++it) {
    if (dir > 0.0 && !(alp > log_half)) break;
    if (dir < 0.0 && !(alp < log_half)) break;
    eps *= dir > 0.0 ? 2.0 : 0.5;
    if (eps > 1e6 || eps < 1e-10) break;
    alp = accept_logp(eps);
  }
  return std::clamp(eps, 1e-10, 1e6);
}

// Nesterov dual averaging on log(eps).
struct DualAvg {
  static constexpr double kGamma = 0.05;
  static constexpr double kT0 = 10.0;
  static constexpr double kKappa = 0.75;

  double mu = 0.0, log_eps = 0.0, log_eps_bar = 0.0, h_bar = 0.0;
  int counter = 0;

  explicit DualAvg(double eps0) { restart(eps0); }

  void restart(double eps0) {
    mu = std::log(10.0 * eps0);
    log_eps = std::log(eps0);
    log_eps_bar = 0.0;
    h_bar = 0.0;
    counter = 0;
  }

  void update(double accept, double target) {
    const double m = static_cast<double>(++counter);
    h_bar = (1.0 - 1.0 / (m + kT0)) * h_bar + (target - accept) / (m + kT0);
    log_eps = mu - std::sqrt(m) / kGamma * h_bar;
    const double w = std::pow(m, -kKappa);
    log_eps_bar = w * log_eps + (1.0 - w) * log_eps_bar;
  }

  double eps() const { return std::exp(log_eps); }
  double eps_bar() const { return counter > 0 ? std::exp(log_eps_bar) : std::exp(log_eps); }
};

struct Welford {
  std::size_t n = 0;
  Vec mean, m2;

  explicit Welford(std::size_t dim) : mean(dim, 0.0), m2(dim, 0.0) {}

  void add(const Vec& x) {
    ++n;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - mean[i];
      mean[i] += d / static_cast<double>(n);
      m2[i] += d * (x[i] - mean[i]);
    }
  }

  // shrunk toward 1e-3 exactly as the draw count warrants
  Vec regularized_variance() const {
    Vec v(mean.size(), 0.0);
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double var = m2[i] / (nn - 1.0);
      v[i] = nn / (nn + 5.0) * var + 1e-3 * (5.0 / (nn + 5.0));
    }
    return v;
  }
};

WarmupResult warmup_impl(Ctx& ctx, const Vec& theta_init) {
  Vec theta = theta_init;
  const int total = ctx.cfg.num_warmup;
  WarmupResult w;
  if (total <= 0) {
    ctx.eps = ctx.cfg.init_step_size > 0.0 ? ctx.cfg.init_step_size : 0.1;
    w.step_size = ctx.eps;
    w.theta = theta;
    return w;
  }

  ctx.eps = find_reasonable_epsilon(ctx, theta);
  DualAvg da(ctx.eps);

  const int fast1 = static_cast<int>(0.15 * total);
  const int fast2 = static_cast<int>(0.10 * total);
  const int slow = total - fast1 - fast2;
  Welford acc(ctx.model.theta_dim);

  for (int it = 0; it < total; ++it) {
    IterResult r = nuts_iter(ctx, theta);
    theta = std::move(r.theta);
    da.update(r.accept_stat, ctx.cfg.target_accept);
    ctx.eps = da.eps();

    const bool in_slow = it >= fast1 && it < fast1 + slow;
    if (in_slow) acc.add(theta);
    if (it == fast1 + slow - 1 && acc.n >= 2) {
      ctx.inv_mass = acc.regularized_variance();
      // the metric changed under the step size, so adaptation starts over
      da.restart(da.eps_bar());
      ctx.eps = da.eps();
    }
  }

  ctx.eps = da.eps_bar();
  w.step_size = ctx.eps;
  w.inv_mass_diag = ctx.inv_mass;
  w.theta = std::move(theta);
  return w;
}

ChainResult sample_impl(const ModelSpec& model, const SamplerConfig& cfg, const Vec& theta_init,
                        std::uint64_t stream) {
  Ctx ctx(model, cfg, stream);
  WarmupResult w = warmup_impl(ctx, theta_init);

  ChainResult res;
  Vec theta = std::move(w.theta);
  double accept_sum = 0.0;
  for (int it = 0; it < cfg.num_samples; ++it) {
    IterResult r = nuts_iter(ctx, theta);
    theta = std::move(r.theta);
    res.draws.push_back(theta);
    accept_sum += r.accept_stat;
    if (r.divergent) ++res.divergences;
  }

  res.total_newton_steps = ctx.newton;
  res.fallback_count = ctx.fallbacks;
  res.solver_failures = ctx.failures;
  res.total_leapfrogs = ctx.leapfrogs;
  res.accept_stat_mean = cfg.num_samples > 0 ? accept_sum / cfg.num_samples : 0.0;
  res.adapted_step_size = ctx.eps;
  res.adapted_inv_mass = ctx.inv_mass;
  return res;
}

}  // namespace

WarmupResult warmup_adapt(const ModelSpec& model, const SamplerConfig& cfg,
                          const Vec& theta_init) {
  Ctx ctx(model, cfg, 0);
  return warmup_impl(ctx, theta_init);
}

ChainResult sample(const ModelSpec& model, const SamplerConfig& cfg, const Vec& theta_init) {
  return sample_impl(model, cfg, theta_init, 0);
}

std::vector<ChainResult> run_chains(const ModelSpec& model, const SamplerConfig& cfg, int n_chains,
                                    const Vec& theta_init) {
  std::vector<ChainResult> out;
  out.reserve(static_cast<std::size_t>(std::max(0, n_chains)));
  for (int c = 0; c < n_chains; ++c)
    out.push_back(sample_impl(model, cfg, theta_init, static_cast<std::uint64_t>(c)));
  return out;
}

}  // namespace grapevine
