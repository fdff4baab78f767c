#include "mibridge/jm_imputer.hpp"

#include "mibridge/samplers.hpp"

#include <stdexcept>

namespace mibridge {

NiwPrior niw_posterior_update(const NiwPrior& prior, const Matrix& data) {
  const Index n = data.rows();
  if (n == 0) return prior;
  if (data.cols() != prior.dim()) {
    throw std::invalid_argument("niw_posterior_update: data columns differ from prior");
  }
  const double nd = static_cast<double>(n);
  const Vector ybar = data.colwise().mean().transpose();
  const Matrix centered = data.rowwise() - ybar.transpose();
  const Matrix scatter = centered.transpose() * centered;
  const double tau_n = prior.tau() + nd;
  const Vector mu_n = (prior.tau() * prior.mu0() + nd * ybar) / tau_n;
  const Vector d = ybar - prior.mu0();
  const Matrix scale_n =
      prior.covariance_scale() + scatter + (prior.tau() * nd / tau_n) * d * d.transpose();
  return NiwPrior::from_covariance_scale(mu_n, tau_n, prior.m() + nd, scale_n);
}

GaussianParams draw_niw(RngStream& rng, const NiwPrior& prior) {
  const Matrix sigma = draw_inv_wishart(rng, prior.m(), prior.covariance_scale());
  const Cholesky chol = cholesky(sigma / prior.tau(), "Sigma / tau");
  Vector mu = draw_mvn(rng, prior.mu0(), chol.matrixL());
  return GaussianParams(std::move(mu), sigma);
}

namespace {

void impute_patterns(const IncompleteData& data, const GaussianParams& params,
                     Matrix& completed, RngStream& rng) {
  for (const MissingPattern& pat : data.patterns()) {
    const ConditionalGaussian cond(params, pat.observed);
    for (Index i : pat.rows) {
      const Vector obs = completed(i, pat.observed).transpose();
      const Vector draw = draw_mvn(rng, cond.mean(obs), cond.cov_factor());
      completed(IndexList{i}, pat.missing) = draw.transpose();
    }
  }
}

}  // namespace

JmState jm_initialize(const IncompleteData& data, const NiwPrior& prior, RngStream& rng) {
  if (data.cols() != prior.dim()) {
    throw std::invalid_argument("JM: prior dimension differs from data columns");
  }
  Matrix completed = initialize_by_observed_draws(data, rng);
  GaussianParams params = draw_niw(rng, niw_posterior_update(prior, completed));
  return JmState{std::move(params), std::move(completed), 0};
}

JmState jm_gibbs_step(const JmState& state, const IncompleteData& data,
                      const NiwPrior& prior, RngStream& rng) {
  GaussianParams params = draw_niw(rng, niw_posterior_update(prior, state.completed));
  Matrix completed = state.completed;
  impute_patterns(data, params, completed, rng);
  return JmState{std::move(params), std::move(completed), state.iteration + 1};
}

std::vector<Matrix> jm_impute(const IncompleteData& data, const NiwPrior& prior,
                              RngStream& rng, std::size_t n_burn, std::size_t m,
                              std::size_t thin) {
  if (m < 1) throw std::invalid_argument("jm_impute: m must be at least 1");
  if (thin < 1) throw std::invalid_argument("jm_impute: thin must be at least 1");
  std::vector<Matrix> out;
  out.reserve(m);
  if (data.missing_count() == 0) {
    out.assign(m, data.values());
    return out;
  }
  JmState state = jm_initialize(data, prior, rng);
  for (std::size_t t = 0; t < n_burn; ++t) state = jm_gibbs_step(state, data, prior, rng);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t t = 0; t < thin; ++t) state = jm_gibbs_step(state, data, prior, rng);
    out.push_back(state.completed);
  }
  return out;
}

}  // namespace mibridge
