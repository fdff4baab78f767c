#pragma once

#include "mibridge/linalg.hpp"

namespace mibridge {

/// Location and covariance of a multivariate normal. Construction
/// symmetrizes rounding-level asymmetry and requires a positive definite
/// covariance; the Cholesky factor is kept alongside.
class GaussianParams {
 public:
  GaussianParams(Vector mu, const Matrix& sigma);

  Index dim() const { return mu_.size(); }
  const Vector& mu() const { return mu_; }
  const Matrix& sigma() const { return sigma_; }
  const Cholesky& chol() const { return chol_; }

 private:
  Vector mu_;
  Matrix sigma_;
  Cholesky chol_;
};

/// The j-th block view of (mu, Sigma): variable j against the rest, the
/// rest kept in ascending index order.
struct PartitionedGaussian {
  Index j = 0;
  double mu_j = 0.0;
  Vector mu_rest;
  double omega_j = 0.0;  // Var(Y_j)
  Vector xi_j;           // Cov(Y_rest, Y_j)
  Matrix sigma_rest;
};

/// Y_j = alpha + beta^T Y_rest + e, e ~ N(0, sigma2). beta is ordered as
/// the rest indices (ascending, j removed).
struct ConditionalRegression {
  double alpha = 0.0;
  Vector beta;
  double sigma2 = 0.0;

  double predict(const Vector& rest) const { return alpha + beta.dot(rest); }
};

PartitionedGaussian partition(const GaussianParams& params, Index j);

/// Inverse of partition(); reassembling an unmodified partition reproduces
/// the source parameters bit for bit.
GaussianParams reassemble(const PartitionedGaussian& part);

/// beta = Sigma_rest^{-1} xi, alpha = mu_j - beta.mu_rest,
/// sigma2 = omega_j - xi.Sigma_rest^{-1} xi. Throws NotPositiveDefinite when
/// Sigma_rest is singular or the residual variance is not positive.
ConditionalRegression to_regression(const PartitionedGaussian& part);

/// Inverse of to_regression given the marginal of the rest:
/// omega = sigma2 + beta^T Sigma_rest beta, xi = Sigma_rest beta,
/// mu_j = alpha + beta.mu_rest.
GaussianParams from_regression(Index j, const ConditionalRegression& reg,
                               const GaussianParams& rest);

/// Conditional law of a fixed missing block given its complement, with the
/// Schur-complement pieces factored once so it can be applied to many rows.
class ConditionalGaussian {
 public:
  ConditionalGaussian(const GaussianParams& params, IndexList observed);

  const IndexList& observed() const { return observed_; }
  const IndexList& missing() const { return missing_; }

  /// E[Y_mis | Y_obs = observed_vals].
  Vector mean(const Vector& observed_vals) const;
  const Matrix& covariance() const { return cov_; }
  /// Lower Cholesky factor of covariance().
  const Matrix& cov_factor() const { return cov_factor_; }

  GaussianParams at(const Vector& observed_vals) const;

 private:
  IndexList observed_;
  IndexList missing_;
  Vector mu_mis_;
  Vector mu_obs_;
  Matrix coef_;  // Sigma_mo Sigma_oo^{-1}
  Matrix cov_;
  Matrix cov_factor_;
};

/// Conditional Gaussian of the variables not in observed_idx, given the
/// values of those in it. observed_idx must be a nonempty proper subset.
GaussianParams conditional_mvn(const GaussianParams& params,
                               const IndexList& observed_idx,
                               const Vector& observed_vals);

double log_density_mvn(const GaussianParams& params, const Vector& y);

/// Normal log density for the scalar case.
double log_density_normal(double y, double mean, double variance);

}  // namespace mibridge
