#pragma once

#include "mibridge/gaussian.hpp"

#include <utility>

namespace mibridge {

// Conventions
// -----------
// The joint prior is normal-inverse-Wishart with hyperparameters
// (mu0, tau, m, Lambda) and unnormalized log density
//
//   log pi(mu, Sigma) = -(m + p + 2)/2 log|Sigma|
//                       - tr(Lambda^{-1} Sigma^{-1}) / 2
//                       - tau/2 (mu - mu0)^T Sigma^{-1} (mu - mu0).
//
// Lambda enters inverted: Sigma^{-1} ~ Wishart(m, Lambda), written
// W^{-1}(m, Lambda) ("precision-scale" convention). The mu | Sigma normal
// contributes |Sigma|^{-1/2}, so the Sigma margin has exponent
// -(m + p + 1)/2 and m is the inverse-Wishart degrees of freedom as is;
// in the covariance-scale convention of samplers.hpp the same law is
// IW(m, Lambda^{-1}).
//
// Splitting variable j from the rest r and reparameterizing (mu, Sigma)
// as theta_j = (alpha_j, beta_j, sigma_j) and theta_r = (mu_r, Sigma_r),
// the density factorizes exactly into
//
//   sigma_j              ~ W^{-1}(m, Lambda_jj)
//   beta_j | sigma_j     ~ N(-psi_j / Lambda_jj, sigma_j C_j)
//   alpha_j | beta_j, sigma_j ~ N(mu0_j - beta_j^T mu0_r, sigma_j / tau)
//   (mu_r, Sigma_r)      ~ NIW(mu0_r, tau, m - 1, C_j)
//
// with psi_j = Lambda_rj and C_j = Lambda_rr - psi_j psi_j^T / Lambda_jj.
// For diagonal Lambda this is sigma_j ~ W^{-1}(m, Lambda_jj) and
// beta_j | sigma_j ~ N(0, sigma_j Lambda_rr).

/// Joint normal-inverse-Wishart prior on (mu, Sigma).
class NiwPrior {
 public:
  NiwPrior(Vector mu0, double tau, double m, const Matrix& lambda);

  /// Builds the prior from the covariance-scale inverse-Wishart form
  /// Sigma ~ IW(df, scale), i.e. lambda = scale^{-1}.
  static NiwPrior from_covariance_scale(Vector mu0, double tau, double df,
                                        const Matrix& scale);

  Index dim() const { return mu0_.size(); }
  const Vector& mu0() const { return mu0_; }
  double tau() const { return tau_; }
  double m() const { return m_; }
  const Matrix& lambda() const { return lambda_; }

  /// Lambda^{-1}: the scale of Sigma ~ IW(m, .) in the covariance-scale
  /// convention.
  const Matrix& covariance_scale() const { return cov_scale_; }

 private:
  Vector mu0_;
  double tau_;
  double m_;
  Matrix lambda_;
  Matrix cov_scale_;
};

/// The j-th block view of (mu0, Lambda).
struct NiwPartition {
  Index j = 0;
  double mu0_j = 0.0;
  Vector mu0_rest;
  double lambda_j = 0.0;  // Lambda_jj
  Vector psi_j;           // Lambda_rj
  Matrix lambda_rest;     // Lambda_rr
  /// Lambda_jj - psi_j^T Lambda_rr^{-1} psi_j.
  double lambda_small_j = 0.0;
};

NiwPartition partition_prior(const NiwPrior& prior, Index j);

/// Normal-inverse-gamma prior of the regression of variable j on the rest.
///
///   sigma_j ~ W^{-1}(sigma_df, sigma_scale)    (precision-scale, scalar)
///           = InvGamma(shape sigma_df / 2, scale 1 / (2 sigma_scale))
///   (alpha_j, beta_j) | sigma_j ~ N(coef_mean, sigma_j coef_scale_given_sigma)
///
/// Coefficients are ordered (intercept, then the rest in ascending index
/// order).
struct NigPrior {
  Index j = 0;
  double sigma_df = 0.0;
  double sigma_scale = 0.0;
  Vector coef_mean;
  Matrix coef_scale_given_sigma;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  double sigma_ig_shape() const { return 0.5 * sigma_df; }
  double sigma_ig_scale() const { return 0.5 / sigma_scale; }

  /// Coefficient covariance with sigma_j replaced by the sigma prior's
  /// scale: sigma_scale * coef_scale_given_sigma. This is the form in which
  /// a conditional prior is usually tabulated (e.g. diag(60, 3600, 3600)
  /// for Lambda = 60 I, tau = 1).
  Matrix coef_covariance_at_scale() const {
    return sigma_scale * coef_scale_given_sigma;
  }
};

struct PriorDecomposition {
  NigPrior conditional;  // pi(theta_j)
  NiwPrior marginal;     // pi(theta_rest), over p - 1 variables
};

/// Splits the joint prior into the independent conditional-model prior for
/// variable j and the marginal prior of the rest. Requires p >= 2.
PriorDecomposition decompose(const NiwPrior& prior, Index j);

/// Conditional priors for every column, in index order.
std::vector<NigPrior> decompose_all(const NiwPrior& prior);

/// Unnormalized joint log density (see Conventions above).
double log_niw_density(const NiwPrior& prior, const Vector& mu, const Matrix& sigma);

/// Unnormalized log density of the NIG prior at theta_j, including the
/// sigma-power factors from the coefficient normalizer.
double log_nig_density(const NigPrior& prior, const ConditionalRegression& theta_j);

/// log pi(theta_j) + log pi(theta_rest) - log|Sigma_rest|. The last term is
/// the Jacobian of (mu, Sigma) -> (theta_j, theta_rest), which makes the
/// result a density on the same (mu, Sigma) measure as log_niw_density, so
/// the two differ by a constant.
double log_factored_density(const NigPrior& cond, const NiwPrior& marg,
                            const ConditionalRegression& theta_j,
                            const GaussianParams& theta_rest);

/// Multivariate t obtained by integrating sigma_j out of a NIG prior.
struct StudentTParams {
  Vector loc;
  Matrix scale;
  double df = 0.0;
};

/// (alpha_j, beta_j) ~ t_df(coef_mean, (1 / (sigma_scale * df)) coef_scale),
/// df = sigma_df.
StudentTParams marginal_t_params(const NigPrior& cond);

}  // namespace mibridge
