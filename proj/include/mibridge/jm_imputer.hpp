#pragma once

#include "mibridge/data.hpp"
#include "mibridge/gaussian.hpp"
#include "mibridge/prior_bridge.hpp"
#include "mibridge/rng.hpp"

#include <cstddef>
#include <vector>

namespace mibridge {

/// One state of the data-augmentation chain: the current parameter draw
/// and the dataset completed under it.
struct JmState {
  GaussianParams params;
  Matrix completed;
  std::size_t iteration = 0;
};

/// Conjugate NIW update with complete data (rows are observations):
/// tau' = tau + n, mu0' = (tau mu0 + n ybar) / tau', m' = m + n and, in the
/// covariance-scale form, S' = S + scatter + (tau n / tau') (ybar - mu0)(.)^T.
/// With no rows the prior is returned unchanged.
NiwPrior niw_posterior_update(const NiwPrior& prior, const Matrix& data);

/// (mu, Sigma) ~ NIW(prior).
GaussianParams draw_niw(RngStream& rng, const NiwPrior& prior);

/// Missing cells start at random draws from their column's observed values;
/// the first parameter draw comes from the posterior given that start.
JmState jm_initialize(const IncompleteData& data, const NiwPrior& prior, RngStream& rng);

/// theta ~ p(theta | completed), then every missing block ~ its conditional
/// normal given the row's observed cells and the fresh theta.
JmState jm_gibbs_step(const JmState& state, const IncompleteData& data,
                      const NiwPrior& prior, RngStream& rng);

/// Runs n_burn steps, then collects m completed datasets `thin` steps apart.
std::vector<Matrix> jm_impute(const IncompleteData& data, const NiwPrior& prior,
                              RngStream& rng, std::size_t n_burn, std::size_t m,
                              std::size_t thin = 1);

}  // namespace mibridge
