#include "mibridge/prior_bridge.hpp"

#include <cmath>
#include <string>

namespace mibridge {

namespace {

// Adding +0.0 turns -0.0 into +0.0 so that serialized zeros carry no sign.
Vector unsigned_zeros(Vector v) {
  v.array() += 0.0;
  return v;
}

Matrix unsigned_zeros(Matrix a) {
  a.array() += 0.0;
  return a;
}

}  // namespace

NiwPrior::NiwPrior(Vector mu0, double tau, double m, const Matrix& lambda)
    : mu0_(std::move(mu0)),
      tau_(tau),
      m_(m),
      lambda_(symmetrized(lambda, "NIW Lambda")) {
  const Index p = mu0_.size();
  if (p < 1) throw std::invalid_argument("NIW prior: empty location");
  if (lambda_.rows() != p) {
    throw std::invalid_argument("NIW prior: Lambda dimension differs from mu0");
  }
  if (!mu0_.allFinite()) throw std::invalid_argument("NIW prior: non-finite mu0");
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) {
    throw std::invalid_argument("NIW prior: tau must be positive");
  }
  if (!(m_ >= static_cast<double>(p)) || !std::isfinite(m_)) {
    throw std::invalid_argument("NIW prior: m = " + std::to_string(m_) +
                                " below dimension " + std::to_string(p));
  }
  cov_scale_ = spd_inverse(cholesky(lambda_, "NIW Lambda"));
}

NiwPrior NiwPrior::from_covariance_scale(Vector mu0, double tau, double df,
                                         const Matrix& scale) {
  const Matrix s = symmetrized(scale, "inverse-Wishart scale");
  NiwPrior prior(std::move(mu0), tau, df,
                 spd_inverse(cholesky(s, "inverse-Wishart scale")));
  prior.cov_scale_ = s;
  return prior;
}

NiwPartition partition_prior(const NiwPrior& prior, Index j) {
  const Index p = prior.dim();
  if (j < 0 || j >= p) throw std::out_of_range("prior partition index out of range");
  const IndexList rest = complement_of(p, j);
  NiwPartition part;
  part.j = j;
  part.mu0_j = prior.mu0()(j);
  part.mu0_rest = prior.mu0()(rest);
  part.lambda_j = prior.lambda()(j, j);
  part.psi_j = prior.lambda()(rest, j);
  part.lambda_rest = prior.lambda()(rest, rest);
  if (p > 1) {
    const Cholesky chol = cholesky(part.lambda_rest, "Lambda_rest");
    part.lambda_small_j = part.lambda_j - part.psi_j.dot(chol.solve(part.psi_j));
  } else {
    part.lambda_small_j = part.lambda_j;
  }
  if (!(part.lambda_small_j > 0.0)) {
    throw NotPositiveDefinite("Schur complement of Lambda_rest");
  }
  return part;
}

void NigPrior::validate() const {
  const Index p = coef_mean.size();
  if (!(sigma_df > 0.0) || !(sigma_scale > 0.0)) {
    throw std::invalid_argument("NIG prior: sigma df and scale must be positive");
  }
  if (p < 1 || coef_scale_given_sigma.rows() != p || coef_scale_given_sigma.cols() != p) {
    throw std::invalid_argument("NIG prior: coefficient dimensions disagree");
  }
  if (j < 0 || j >= p) {
    throw std::invalid_argument("NIG prior: column index outside [0, p)");
  }
  cholesky(symmetrized(coef_scale_given_sigma, "NIG coefficient scale"),
           "NIG coefficient scale");
}

PriorDecomposition decompose(const NiwPrior& prior, Index j) {
  const Index p = prior.dim();
  if (p < 2) throw std::invalid_argument("decompose: need at least two variables");
  const NiwPartition part = partition_prior(prior, j);

  // C = Lambda_rr - psi psi^T / Lambda_jj, the Schur complement of Lambda_jj.
  const Vector b0 = -part.psi_j / part.lambda_j;
  const Matrix c = symmetrized(
      part.lambda_rest - part.psi_j * part.psi_j.transpose() / part.lambda_j,
      "conditional coefficient scale");
  const Vector c_mu = c * part.mu0_rest;

  NigPrior cond;
  cond.j = j;
  cond.sigma_df = prior.m();
  cond.sigma_scale = part.lambda_j;
  cond.coef_mean = Vector(p);
  cond.coef_mean(0) = part.mu0_j - b0.dot(part.mu0_rest);
  cond.coef_mean.tail(p - 1) = b0;
  cond.coef_scale_given_sigma = Matrix(p, p);
  cond.coef_scale_given_sigma(0, 0) = 1.0 / prior.tau() + part.mu0_rest.dot(c_mu);
  cond.coef_scale_given_sigma.block(1, 0, p - 1, 1) = -c_mu;
  cond.coef_scale_given_sigma.block(0, 1, 1, p - 1) = -c_mu.transpose();
  cond.coef_scale_given_sigma.bottomRightCorner(p - 1, p - 1) = c;
  cond.coef_mean = unsigned_zeros(cond.coef_mean);
  cond.coef_scale_given_sigma = unsigned_zeros(cond.coef_scale_given_sigma);
  cond.validate();

  NiwPrior marg(unsigned_zeros(part.mu0_rest), prior.tau(), prior.m() - 1.0,
                unsigned_zeros(c));
  return PriorDecomposition{std::move(cond), std::move(marg)};
}

std::vector<NigPrior> decompose_all(const NiwPrior& prior) {
  std::vector<NigPrior> out;
  out.reserve(static_cast<std::size_t>(prior.dim()));
  for (Index j = 0; j < prior.dim(); ++j) {
    out.push_back(decompose(prior, j).conditional);
  }
  return out;
}

double log_niw_density(const NiwPrior& prior, const Vector& mu, const Matrix& sigma) {
  const Index p = prior.dim();
  if (mu.size() != p || sigma.rows() != p || sigma.cols() != p) {
    throw std::invalid_argument("log_niw_density: dimension mismatch");
  }
  const Cholesky chol = cholesky(symmetrized(sigma, "Sigma"), "Sigma");
  const Matrix sigma_inv = spd_inverse(chol);
  const Vector d = mu - prior.mu0();
  const double trace_term = prior.covariance_scale().cwiseProduct(sigma_inv).sum();
  const double quad = d.dot(chol.solve(d));
  return -0.5 * (prior.m() + static_cast<double>(p) + 2.0) * log_det(chol) -
         0.5 * trace_term - 0.5 * prior.tau() * quad;
}

double log_nig_density(const NigPrior& prior, const ConditionalRegression& theta_j) {
  const Index k = prior.coef_mean.size();
  if (theta_j.beta.size() + 1 != k) {
    throw std::invalid_argument("log_nig_density: coefficient length mismatch");
  }
  if (!(theta_j.sigma2 > 0.0)) {
    throw std::invalid_argument("log_nig_density: sigma2 must be positive");
  }
  Vector coef(k);
  coef(0) = theta_j.alpha;
  coef.tail(k - 1) = theta_j.beta;
  const Vector d = coef - prior.coef_mean;
  const Cholesky chol = cholesky(prior.coef_scale_given_sigma, "NIG coefficient scale");
  const double s = theta_j.sigma2;
  // InvGamma(shape a, scale b) on sigma, times N(coef_mean, s V).
  const double a = prior.sigma_ig_shape();
  const double b = prior.sigma_ig_scale();
  return -(a + 1.0) * std::log(s) - b / s -
         0.5 * static_cast<double>(k) * std::log(s) - 0.5 * d.dot(chol.solve(d)) / s;
}

double log_factored_density(const NigPrior& cond, const NiwPrior& marg,
                            const ConditionalRegression& theta_j,
                            const GaussianParams& theta_rest) {
  return log_nig_density(cond, theta_j) +
         log_niw_density(marg, theta_rest.mu(), theta_rest.sigma()) -
         log_det(theta_rest.chol());
}

StudentTParams marginal_t_params(const NigPrior& cond) {
  cond.validate();
  StudentTParams t;
  t.df = cond.sigma_df;
  t.loc = cond.coef_mean;
  t.scale = cond.coef_scale_given_sigma / (cond.sigma_scale * cond.sigma_df);
  return t;
}

}  // namespace mibridge
