#include "grapevine/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace grapevine {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double acklam_raw(double p) {
  // rational approximation for the lower tail / central region, p <= 0.5
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  if (p < 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double refine(double x, double p) {
  // one Halley step against the exact normal CDF
  const double e = 0.5 * std::erfc(-x / 1.4142135623730951) - p;
  const double u = e * 2.5066282746310002 * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace

double inverse_normal_cdf(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (p == 0.5) return 0.0;
  // reflect so the result is exactly odd around p = 0.5
  if (p > 0.5) return -inverse_normal_cdf(1.0 - p);
  return refine(acklam_raw(p), p);
}

namespace {

// pooled average ranks (ties averaged), Blom offset, normal quantile
std::vector<std::vector<double>> rank_normalize(const std::vector<std::vector<double>>& seqs) {
  std::size_t total = 0;
  for (const auto& s : seqs) total += s.size();
  struct Entry {
    double value;
    std::size_t seq, idx;
  };
  std::vector<Entry> pool;
  pool.reserve(total);
  for (std::size_t m = 0; m < seqs.size(); ++m)
    for (std::size_t i = 0; i < seqs[m].size(); ++i) pool.push_back({seqs[m][i], m, i});
  std::sort(pool.begin(), pool.end(),
            [](const Entry& a, const Entry& b) { return a.value < b.value; });

  std::vector<std::vector<double>> z(seqs.size());
  for (std::size_t m = 0; m < seqs.size(); ++m) z[m].resize(seqs[m].size());
  const double denom = static_cast<double>(total) + 0.25;
  std::size_t i = 0;
  while (i < pool.size()) {
    std::size_t j = i;
    while (j < pool.size() && pool[j].value == pool[i].value) ++j;
    const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    const double q = inverse_normal_cdf((avg_rank - 0.375) / denom);
    for (std::size_t k = i; k < j; ++k) z[pool[k].seq][pool[k].idx] = q;
    i = j;
  }
  return z;
}

double autocov(const std::vector<double>& x, double mean, std::size_t lag) {
  double s = 0.0;
  for (std::size_t i = 0; i + lag < x.size(); ++i) s += (x[i] - mean) * (x[i + lag] - mean);
  return s / static_cast<double>(x.size());
}

// Geyer-truncated multi-chain estimate on already-transformed sequences
double ess_scalar(const std::vector<std::vector<double>>& chains) {
  const std::size_t m = chains.size();
  const std::size_t n = chains[0].size();
  if (n < 4) return 0.0;

  std::vector<double> mean(m), svar(m);
  for (std::size_t c = 0; c < m; ++c) {
    mean[c] = std::accumulate(chains[c].begin(), chains[c].end(), 0.0) / n;
    double s = 0.0;
    for (double x : chains[c]) s += (x - mean[c]) * (x - mean[c]);
    svar[c] = s / static_cast<double>(n - 1);
  }
  const double w = std::accumulate(svar.begin(), svar.end(), 0.0) / m;
  double var_plus = w * static_cast<double>(n - 1) / n;
  if (m > 1) {
    const double grand = std::accumulate(mean.begin(), mean.end(), 0.0) / m;
    double b = 0.0;
    for (double mu : mean) b += (mu - grand) * (mu - grand);
    var_plus += b / static_cast<double>(m - 1);
  }
  if (!(var_plus > 0.0) || !std::isfinite(var_plus)) return 0.0;

  auto rho = [&](std::size_t t) {
    double acov_mean = 0.0;
    for (std::size_t c = 0; c < m; ++c) acov_mean += autocov(chains[c], mean[c], t);
    acov_mean /= m;
    return 1.0 - (w - acov_mean) / var_plus;
  };

  // paired sums, truncated at the first non-positive pair, forced monotone
  double tau = -1.0;
  double prev_pair = kInf;
  for (std::size_t t = 0; t + 1 < n; t += 2) {
    double pair = rho(t) + rho(t + 1);
    if (!(pair > 0.0)) break;
    pair = std::min(pair, prev_pair);
    prev_pair = pair;
    tau += 2.0 * pair;
  }
  if (!(tau > 0.0)) return static_cast<double>(m * n);
  const double ess = static_cast<double>(m * n) / tau;
  return std::min(ess, 10.0 * static_cast<double>(m * n));
}

std::vector<std::vector<double>> extract_dim(const std::vector<std::vector<Vec>>& chains,
                                             std::size_t d) {
  std::vector<std::vector<double>> out(chains.size());
  for (std::size_t m = 0; m < chains.size(); ++m) {
    out[m].resize(chains[m].size());
    for (std::size_t i = 0; i < chains[m].size(); ++i) out[m][i] = chains[m][i][d];
  }
  return out;
}

}  // namespace

Vec ess(const std::vector<std::vector<Vec>>& chains) {
  if (chains.empty() || chains[0].empty()) return {};
  const std::size_t dim = chains[0][0].size();
  Vec out(dim, 0.0);
  for (std::size_t d = 0; d < dim; ++d) {
    auto seqs = extract_dim(chains, d);
    // a constant dimension carries no information
    bool constant = true;
    for (const auto& s : seqs)
      for (double x : s)
        if (x != seqs[0][0]) {
          constant = false;
          break;
        }
    if (constant) {
      out[d] = 0.0;
      continue;
    }
    out[d] = ess_scalar(rank_normalize(seqs));
  }
  return out;
}

Vec split_rhat(const std::vector<std::vector<Vec>>& chains) {
  if (chains.empty() || chains[0].empty()) return {};
  const std::size_t dim = chains[0][0].size();
  Vec out(dim, 1.0);
  for (std::size_t d = 0; d < dim; ++d) {
    const auto seqs = extract_dim(chains, d);
    std::vector<std::vector<double>> halves;
    for (const auto& s : seqs) {
      const std::size_t h = s.size() / 2;
      if (h == 0) continue;
      halves.emplace_back(s.begin(), s.begin() + h);
      halves.emplace_back(s.end() - h, s.end());
    }
    if (halves.empty()) continue;

    std::vector<double> mu(halves.size());
    double w = 0.0;
    for (std::size_t j = 0; j < halves.size(); ++j) {
      const auto& h = halves[j];
      mu[j] = std::accumulate(h.begin(), h.end(), 0.0) / h.size();
      double v = 0.0;
      for (double x : h) v += (x - mu[j]) * (x - mu[j]);
      w += v / h.size();
    }
    w /= halves.size();
    const double grand = std::accumulate(mu.begin(), mu.end(), 0.0) / mu.size();
    double ms = 0.0;
    for (double x : mu) ms += (x - grand) * (x - grand);
    ms /= mu.size();

    if (w > 0.0)
      out[d] = std::sqrt(1.0 + ms / w);
    else
      out[d] = ms > 0.0 ? kInf : 1.0;
  }
  return out;
}

RunVerdict verdict(const std::vector<ChainResult>& results) {
  RunVerdict v;
  std::vector<std::vector<Vec>> chains;
  std::size_t total_draws = 0;
  for (const auto& r : results) {
    v.divergences += r.divergences;
    v.solver_failures += r.solver_failures;
    if (!r.draws.empty()) {
      chains.push_back(r.draws);
      total_draws += r.draws.size();
    }
  }
  if (chains.empty()) return v;

  const Vec e = ess(chains);
  const Vec r = split_rhat(chains);
  v.ess_bulk_min = e.empty() ? 0.0 : *std::min_element(e.begin(), e.end());
  v.rhat_max = r.empty() ? kInf : *std::max_element(r.begin(), r.end());
  v.passed = v.divergences == 0 && v.solver_failures == 0 &&
             v.ess_bulk_min >= 0.1 * static_cast<double>(total_draws) && v.rhat_max < 1.01;
  return v;
}

}  // namespace grapevine
