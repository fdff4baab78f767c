#include "mibridge/fcs_imputer.hpp"

#include "mibridge/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mibridge {

VisitSequence::VisitSequence(const IncompleteData& data, IndexList order)
    : order_(std::move(order)) {
  IndexList sorted = order_;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != data.incomplete_columns()) {
    throw std::invalid_argument(
        "visit sequence must be a permutation of the incomplete columns");
  }
}

VisitSequence VisitSequence::ascending(const IncompleteData& data) {
  return VisitSequence(data, data.incomplete_columns());
}

VisitSequence VisitSequence::from_names(const IncompleteData& data,
                                        const std::vector<std::string>& names) {
  IndexList order;
  for (const std::string& name : names) {
    const Index j = data.column_index(name);
    if (std::find(order.begin(), order.end(), j) != order.end()) {
      throw std::invalid_argument("visit sequence names column '" + name + "' twice");
    }
    if (data.mask().col(j).any()) order.push_back(j);
  }
  return VisitSequence(data, std::move(order));
}

NigPosterior nig_posterior_update(const NigPrior& prior, const Matrix& x, const Vector& y) {
  const Index k = prior.coef_mean.size();
  if (x.cols() != k) {
    throw std::invalid_argument("nig_posterior_update: design has " +
                                std::to_string(x.cols()) + " columns, prior expects " +
                                std::to_string(k));
  }
  if (x.rows() != y.size()) {
    throw std::invalid_argument("nig_posterior_update: design and response lengths differ");
  }
  const Matrix prior_precision =
      spd_inverse(cholesky(prior.coef_scale_given_sigma, "NIG coefficient scale"));
  const double prior_scale = 1.0 / prior.sigma_scale;

  NigPosterior post;
  post.sigma_df = prior.sigma_df + static_cast<double>(x.rows());
  if (x.rows() == 0) {
    post.coef_mean = prior.coef_mean;
    post.coef_precision_chol = cholesky(prior_precision, "prior precision");
    post.sigma_scale = prior_scale;
    return post;
  }
  Matrix precision = prior_precision;
  precision.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  precision.triangularView<Eigen::StrictlyUpper>() = precision.transpose();
  post.coef_precision_chol = cholesky(precision, "posterior coefficient precision");
  post.coef_mean = post.coef_precision_chol.solve(prior_precision * prior.coef_mean +
                                                  x.transpose() * y);
  const Vector shrink = post.coef_mean - prior.coef_mean;
  post.sigma_scale = prior_scale + (y - x * post.coef_mean).squaredNorm() +
                     shrink.dot(prior_precision * shrink);
  return post;
}

ConditionalRegression draw_regression(const NigPosterior& post, RngStream& rng) {
  const double sigma2 = draw_inv_gamma(rng, 0.5 * post.sigma_df, 0.5 * post.sigma_scale);
  const Index k = post.coef_mean.size();
  Vector z(k);
  for (Index i = 0; i < k; ++i) z(i) = rng.standard_normal();
  // precision = L L^T, so L^{-T} z has covariance precision^{-1}.
  const Vector coef = post.coef_mean +
                      std::sqrt(sigma2) * post.coef_precision_chol.matrixU().solve(z);
  ConditionalRegression reg;
  reg.alpha = coef(0);
  reg.beta = coef.tail(k - 1);
  reg.sigma2 = sigma2;
  return reg;
}

Vector impute_column(const Matrix& completed, const IncompleteData& data, Index j,
                     const ConditionalRegression& regression, RngStream& rng) {
  if (j < 0 || j >= data.cols()) throw std::out_of_range("impute_column: bad column");
  if (regression.beta.size() != data.cols() - 1) {
    throw std::invalid_argument("impute_column: regression has wrong number of slopes");
  }
  if (!(regression.sigma2 >= 0.0)) {
    throw std::invalid_argument("impute_column: negative residual variance");
  }
  const IndexList rest = complement_of(data.cols(), j);
  const double sd = std::sqrt(regression.sigma2);
  Vector column = completed.col(j);
  for (Index i = 0; i < data.rows(); ++i) {
    if (!data.missing(i, j)) continue;
    const Vector x = completed(i, rest).transpose();
    const double noise = sd > 0.0 ? sd * rng.standard_normal() : 0.0;
    column(i) = regression.predict(x) + noise;
  }
  return column;
}

NigPriorSet::NigPriorSet(std::vector<NigPrior> priors) : priors_(std::move(priors)) {
  for (std::size_t a = 0; a < priors_.size(); ++a) {
    priors_[a].validate();
    for (std::size_t b = 0; b < a; ++b) {
      if (priors_[a].j == priors_[b].j) {
        throw std::invalid_argument("duplicate NIG prior for column " +
                                    std::to_string(priors_[a].j));
      }
    }
  }
}

bool NigPriorSet::has(Index j) const {
  return std::any_of(priors_.begin(), priors_.end(),
                     [j](const NigPrior& p) { return p.j == j; });
}

const NigPrior& NigPriorSet::at(Index j) const {
  for (const NigPrior& p : priors_) {
    if (p.j == j) return p;
  }
  throw std::out_of_range("no NIG prior for column " + std::to_string(j));
}

namespace {

struct ColumnModel {
  Index column;
  const NigPrior* prior;
  IndexList observed_rows;
  IndexList rest;
};

}  // namespace

Matrix fcs_iterate(const IncompleteData& data, const NigPriorSet& priors,
                   const VisitSequence& visit, RngStream& rng, std::size_t n_iter,
                   const FcsTraceHook& hook, std::size_t chain) {
  std::vector<ColumnModel> models;
  for (Index j : visit.order()) {
    const NigPrior& prior = priors.at(j);
    if (prior.coef_mean.size() != data.cols()) {
      throw std::invalid_argument("NIG prior for column " + std::to_string(j) +
                                  " has the wrong number of coefficients");
    }
    models.push_back({j, &prior, data.observed_rows(j), complement_of(data.cols(), j)});
  }

  Matrix completed = initialize_by_observed_draws(data, rng);
  for (std::size_t it = 0; it < n_iter; ++it) {
    for (std::size_t pos = 0; pos < models.size(); ++pos) {
      const ColumnModel& model = models[pos];
      const Index n_obs = static_cast<Index>(model.observed_rows.size());
      Matrix x(n_obs, data.cols());
      x.col(0).setOnes();
      x.rightCols(data.cols() - 1) = completed(model.observed_rows, model.rest);
      const Vector y = completed(model.observed_rows, model.column);
      const ConditionalRegression reg =
          draw_regression(nig_posterior_update(*model.prior, x, y), rng);
      completed.col(model.column) = impute_column(completed, data, model.column, reg, rng);
      if (hook) {
        hook(FcsTraceEvent{chain, it, pos, model.column, completed, reg});
      }
    }
  }
  return completed;
}

std::vector<Matrix> fcs_impute(const IncompleteData& data, const NigPriorSet& priors,
                               const VisitSequence& visit, const RngStream& rng,
                               std::size_t n_burn, std::size_t m) {
  if (m < 1) throw std::invalid_argument("fcs_impute: m must be at least 1");
  std::vector<Matrix> out;
  out.reserve(m);
  if (data.missing_count() == 0) {
    out.assign(m, data.values());
    return out;
  }
  for (std::size_t k = 0; k < m; ++k) {
    RngStream chain = rng.child(k);
    out.push_back(fcs_iterate(data, priors, visit, chain, n_burn, {}, k));
  }
  return out;
}

}  // namespace mibridge
