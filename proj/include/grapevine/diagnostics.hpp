#ifndef GRAPEVINE_DIAGNOSTICS_HPP
#define GRAPEVINE_DIAGNOSTICS_HPP

#include "grapevine/nuts.hpp"

namespace grapevine {

// chains[m][i] is draw i of chain m; all chains same length, same dim

// Rank-normalised bulk effective sample size per dimension: pooled ranks
// through the normal quantile function, per-chain autocovariances combined
// across chains, Geyer initial-monotone-positive-sequence truncation.
// A constant dimension reports 0.
Vec ess(const std::vector<std::vector<Vec>>& chains);

// Split-chain potential scale reduction per dimension. Each chain is split
// in half; R = sqrt(1 + between-mean spread / within variance). Duplicating
// a chain leaves the value unchanged.
Vec split_rhat(const std::vector<std::vector<Vec>>& chains);

struct RunVerdict {
  double ess_bulk_min = 0.0;
  double rhat_max = 0.0;
  std::uint64_t divergences = 0;
  std::uint64_t solver_failures = 0;
  bool passed = false;
};

// passed iff no divergences, no solver failures, min bulk ESS >= 10% of the
// total draw count, and max split-Rhat < 1.01.
RunVerdict verdict(const std::vector<ChainResult>& results);

// Blom-offset normal quantile used by the rank normalisation; exposed for
// reuse in tests.
double inverse_normal_cdf(double p);

}  // namespace grapevine

#endif
