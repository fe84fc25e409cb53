#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "grapevine/diagnostics.hpp"
#include "grapevine/rng.hpp"
#include "support.hpp"

using namespace grapevine;
using namespace grapevine::testsupport;

namespace {

// stationary AR(1) with unit marginal variance
std::vector<std::vector<Vec>> ar1_chains(double phi, int m, int n, std::uint64_t seed) {
  std::vector<std::vector<Vec>> chains(m);
  const double se = std::sqrt(1.0 - phi * phi);
  for (int c = 0; c < m; ++c) {
    Rng rng(seed, 100 + static_cast<std::uint64_t>(c));
    double x = rng.normal();
    for (int i = 0; i < n; ++i) {
      x = phi * x + se * rng.normal();
      chains[c].push_back(Vec{x});
    }
  }
  return chains;
}

std::vector<ChainResult> as_results(const std::vector<std::vector<Vec>>& chains) {
  std::vector<ChainResult> rs(chains.size());
  for (std::size_t c = 0; c < chains.size(); ++c) rs[c].draws = chains[c];
  return rs;
}

}  // namespace

TEST_CASE("ess matches the ar1 closed form") {
  // ESS/n for AR(1) is (1-phi)/(1+phi); phi = 0.9 gives 0.0526
  auto chains = ar1_chains(0.9, 4, 2500, 1);
  const double expected = 10000.0 * (1.0 - 0.9) / (1.0 + 0.9);
  const double e = ess(chains)[0];
  CHECK(e > 0.5 * expected);
  CHECK(e < 1.5 * expected);
}

TEST_CASE("ess of independent draws is close to the draw count") {
  auto chains = ar1_chains(0.0, 4, 1000, 1);
  const double e = ess(chains)[0];
  CHECK(e >= 0.75 * 4000.0);
  CHECK(e <= 1.25 * 4000.0);
}

TEST_CASE("antithetic chains are superefficient and the estimate is capped") {
  // moderate negative correlation: more effective draws than raw draws
  const double mn = 4.0 * 2000.0;
  const double super = ess(ar1_chains(-0.6, 4, 2000, 1))[0];
  CHECK(super > 2.0 * mn);
  CHECK(super <= 10.0 * mn);

  // strong negative correlation walks the Geyer sum right up to zero: on
  // this seed the truncated tau goes non-positive and the estimate falls
  // back to the raw draw count
  CHECK(ess(ar1_chains(-0.9, 4, 2000, 1))[0] == mn);
  // and on this seed tau stays positive but tiny, so the cap binds exactly
  CHECK(ess(ar1_chains(-0.9, 4, 2000, 11))[0] == 10.0 * mn);
}

TEST_CASE("ess degenerate inputs report zero") {
  // constant dimension
  std::vector<std::vector<Vec>> constant(2, std::vector<Vec>(50, Vec{3.5}));
  CHECK(ess(constant)[0] == 0.0);

  // chains shorter than four draws
  std::vector<std::vector<Vec>> tiny(2);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < 3; ++i) tiny[c].push_back(Vec{static_cast<double>(c + i)});
  CHECK(ess(tiny)[0] == 0.0);

  CHECK(ess({}).empty());
}

TEST_CASE("rank normalisation makes ess invariant to monotone transforms") {
  auto chains = ar1_chains(0.7, 2, 800, 5);
  const double base = ess(chains)[0];

  auto mapped = chains;
  for (auto& c : mapped)
    for (auto& d : c) d[0] = std::exp(d[0]);
  CHECK(ess(mapped)[0] == base);

  // a strictly decreasing map reverses every rank; the normalised scores
  // flip sign (to rounding of the reflected quantile argument), so the
  // autocovariances agree to float precision
  auto flipped = chains;
  for (auto& c : flipped)
    for (auto& d : c) d[0] = -2.0 * d[0] + 7.0;
  CHECK(ess(flipped)[0] == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("split rhat flags separated chains and accepts mixed ones") {
  auto good = ar1_chains(0.3, 4, 500, 2);
  CHECK(split_rhat(good)[0] < 1.01);

  // shift one chain by several marginal sds
  auto bad = good;
  for (auto& d : bad[0]) d[0] += 5.0;
  CHECK(split_rhat(bad)[0] > 1.01);

  // a trending chain disagrees with itself across its two halves
  std::vector<std::vector<Vec>> trend(2);
  Rng rng(3, 0);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < 400; ++i)
      trend[c].push_back(Vec{0.01 * i + 0.1 * rng.normal()});
  CHECK(split_rhat(trend)[0] > 1.01);
}

TEST_CASE("split rhat is invariant under chain duplication") {
  auto chains = ar1_chains(0.5, 2, 600, 4);
  const double base = split_rhat(chains)[0];

  auto doubled = chains;
  doubled.push_back(chains[0]);
  doubled.push_back(chains[1]);
  CHECK(split_rhat(doubled)[0] == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("split rhat degenerate variance cases") {
  // all chains constant and equal: nothing to disagree about
  std::vector<std::vector<Vec>> same(2, std::vector<Vec>(40, Vec{1.0}));
  CHECK(split_rhat(same)[0] == 1.0);

  // constant chains at different values: zero within, positive between
  std::vector<std::vector<Vec>> apart(2, std::vector<Vec>(40, Vec{1.0}));
  for (auto& d : apart[1]) d[0] = 2.0;
  CHECK(std::isinf(split_rhat(apart)[0]));
}

TEST_CASE("inverse normal cdf round-trips against the exact cdf") {
  const double ps[] = {1e-10, 1e-6,  0.001, 0.02,     0.02425, 0.3,
                       0.5,   0.7,   0.975, 0.999999, 1.0 - 1e-10};
  for (double p : ps) {
    const double x = inverse_normal_cdf(p);
    CHECK(std::fabs(normal_cdf(x) - p) < 1e-12);
  }
  CHECK(inverse_normal_cdf(0.5) == 0.0);
  // exactly odd whenever 1 - p is exact in floating point
  CHECK(inverse_normal_cdf(0.75) == -inverse_normal_cdf(0.25));
  CHECK(inverse_normal_cdf(0.9375) == -inverse_normal_cdf(0.0625));
  CHECK(std::isinf(inverse_normal_cdf(0.0)));
  CHECK(inverse_normal_cdf(0.0) < 0.0);
  CHECK(std::isinf(inverse_normal_cdf(1.0)));
  CHECK(inverse_normal_cdf(1.0) > 0.0);
  CHECK(std::isnan(inverse_normal_cdf(-0.1)));
  CHECK(std::isnan(inverse_normal_cdf(1.1)));
}

TEST_CASE("verdict combines counters and mixing thresholds") {
  auto good = as_results(ar1_chains(0.2, 4, 500, 6));
  RunVerdict v = verdict(good);
  CHECK(v.passed);
  CHECK(v.divergences == 0);
  CHECK(v.solver_failures == 0);
  CHECK(v.ess_bulk_min >= 0.1 * 2000.0);
  CHECK(v.rhat_max < 1.01);

  auto div = good;
  div[2].divergences = 1;
  CHECK_FALSE(verdict(div).passed);

  auto fail = good;
  fail[0].solver_failures = 3;
  CHECK_FALSE(verdict(fail).passed);

  // sticky chains: same distribution but far too little information
  auto sticky = as_results(ar1_chains(0.999, 4, 500, 6));
  CHECK_FALSE(verdict(sticky).passed);

  CHECK_FALSE(verdict({}).passed);
}
