#include "mibridge/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mibridge {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void check_index(Index j, Index p) {
  if (j < 0 || j >= p) {
    throw std::out_of_range("variable index " + std::to_string(j) +
                            " outside [0, " + std::to_string(p) + ")");
  }
}

}  // namespace

GaussianParams::GaussianParams(Vector mu, const Matrix& sigma)
    : mu_(std::move(mu)), sigma_(symmetrized(sigma, "Gaussian covariance")) {
  if (sigma_.rows() != mu_.size()) {
    throw std::invalid_argument("Gaussian: mean and covariance dimensions differ");
  }
  if (!mu_.allFinite()) {
    throw std::invalid_argument("Gaussian: non-finite mean");
  }
  chol_ = cholesky(sigma_, "Gaussian covariance");
}

PartitionedGaussian partition(const GaussianParams& params, Index j) {
  const Index p = params.dim();
  check_index(j, p);
  const IndexList rest = complement_of(p, j);
  PartitionedGaussian part;
  part.j = j;
  part.mu_j = params.mu()(j);
  part.mu_rest = params.mu()(rest);
  part.omega_j = params.sigma()(j, j);
  part.xi_j = params.sigma()(rest, j);
  part.sigma_rest = params.sigma()(rest, rest);
  return part;
}

GaussianParams reassemble(const PartitionedGaussian& part) {
  const Index p = part.mu_rest.size() + 1;
  check_index(part.j, p);
  const IndexList rest = complement_of(p, part.j);
  Vector mu(p);
  Matrix sigma(p, p);
  mu(part.j) = part.mu_j;
  mu(rest) = part.mu_rest;
  sigma(part.j, part.j) = part.omega_j;
  sigma(rest, IndexList{part.j}) = part.xi_j;
  sigma(IndexList{part.j}, rest) = part.xi_j.transpose();
  sigma(rest, rest) = part.sigma_rest;
  return GaussianParams(std::move(mu), sigma);
}

ConditionalRegression to_regression(const PartitionedGaussian& part) {
  const Cholesky chol = cholesky(part.sigma_rest, "Sigma_rest");
  ConditionalRegression reg;
  reg.beta = chol.solve(part.xi_j);
  reg.alpha = part.mu_j - reg.beta.dot(part.mu_rest);
  reg.sigma2 = part.omega_j - part.xi_j.dot(reg.beta);
  if (!(reg.sigma2 > 0.0)) {
    throw NotPositiveDefinite("residual variance of regression on the rest");
  }
  return reg;
}

GaussianParams from_regression(Index j, const ConditionalRegression& reg,
                               const GaussianParams& rest) {
  const Index p = rest.dim() + 1;
  check_index(j, p);
  if (reg.beta.size() != rest.dim()) {
    throw std::invalid_argument("from_regression: beta has wrong length");
  }
  PartitionedGaussian part;
  part.j = j;
  part.mu_rest = rest.mu();
  part.sigma_rest = rest.sigma();
  part.xi_j = rest.sigma() * reg.beta;
  part.omega_j = reg.sigma2 + reg.beta.dot(part.xi_j);
  part.mu_j = reg.alpha + reg.beta.dot(rest.mu());
  return reassemble(part);
}

ConditionalGaussian::ConditionalGaussian(const GaussianParams& params,
                                         IndexList observed)
    : observed_(std::move(observed)) {
  const Index p = params.dim();
  std::sort(observed_.begin(), observed_.end());
  if (std::adjacent_find(observed_.begin(), observed_.end()) != observed_.end()) {
    throw std::invalid_argument("conditional_mvn: duplicate observed index");
  }
  for (Index k : observed_) check_index(k, p);
  if (observed_.empty() || static_cast<Index>(observed_.size()) == p) {
    throw std::invalid_argument(
        "conditional_mvn: observed set must be a nonempty proper subset");
  }
  missing_ = complement_of(p, observed_);

  const Matrix& s = params.sigma();
  mu_mis_ = params.mu()(missing_);
  mu_obs_ = params.mu()(observed_);
  const Cholesky chol_oo = cholesky(s(observed_, observed_), "observed block");
  const Matrix s_om = s(observed_, missing_);
  coef_ = chol_oo.solve(s_om).transpose();
  cov_ = symmetrized(s(missing_, missing_) - coef_ * s_om,
                     "conditional covariance");
  const Cholesky chol_cov = cholesky(cov_, "conditional covariance");
  cov_factor_ = chol_cov.matrixL();
}

Vector ConditionalGaussian::mean(const Vector& observed_vals) const {
  if (observed_vals.size() != static_cast<Index>(observed_.size())) {
    throw std::invalid_argument("conditional_mvn: observed values length mismatch");
  }
  return mu_mis_ + coef_ * (observed_vals - mu_obs_);
}

GaussianParams ConditionalGaussian::at(const Vector& observed_vals) const {
  return GaussianParams(mean(observed_vals), cov_);
}

GaussianParams conditional_mvn(const GaussianParams& params,
                               const IndexList& observed_idx,
                               const Vector& observed_vals) {
  return ConditionalGaussian(params, observed_idx).at(observed_vals);
}

double log_density_mvn(const GaussianParams& params, const Vector& y) {
  if (y.size() != params.dim()) {
    throw std::invalid_argument("log_density_mvn: dimension mismatch");
  }
  const Vector z = params.chol().matrixL().solve(y - params.mu());
  return -0.5 * (static_cast<double>(params.dim()) * kLog2Pi +
                 log_det(params.chol()) + z.squaredNorm());
}

double log_density_normal(double y, double mean, double variance) {
  const double d = y - mean;
  return -0.5 * (kLog2Pi + std::log(variance) + d * d / variance);
}

}  // namespace mibridge
