#pragma once

#include "mibridge/data.hpp"
#include "mibridge/gaussian.hpp"
#include "mibridge/prior_bridge.hpp"
#include "mibridge/rng.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace mibridge {

/// Order in which the incomplete columns are updated within a sweep.
class VisitSequence {
 public:
  /// `order` must be a permutation of data.incomplete_columns().
  VisitSequence(const IncompleteData& data, IndexList order);

  /// Incomplete columns in ascending order.
  static VisitSequence ascending(const IncompleteData& data);
  /// Column names in visit order; complete columns named in the list are
  /// skipped, so one configured order serves every replication.
  static VisitSequence from_names(const IncompleteData& data,
                                  const std::vector<std::string>& names);

  const IndexList& order() const { return order_; }

 private:
  IndexList order_;
};

/// Conjugate posterior of one regression:
///   sigma ~ InvGamma(sigma_df / 2, sigma_scale / 2)
///   (alpha, beta) | sigma ~ N(coef_mean, sigma * precision^{-1})
/// with precision = L L^T held as its Cholesky factor. sigma_df and
/// sigma_scale follow the covariance-scale convention of samplers.hpp.
struct NigPosterior {
  Vector coef_mean;
  Cholesky coef_precision_chol;
  double sigma_df = 0.0;
  double sigma_scale = 0.0;
};

/// X is the n x p design including the leading intercept column. Throws
/// NotPositiveDefinite if the posterior precision is numerically singular.
NigPosterior nig_posterior_update(const NigPrior& prior, const Matrix& x, const Vector& y);

/// sigma ~ InvGamma, then (alpha, beta) | sigma ~ N.
ConditionalRegression draw_regression(const NigPosterior& post, RngStream& rng);

/// New values of column j of `completed`: observed cells copied through,
/// missing cells drawn as alpha + beta^T y_rest + e, e ~ N(0, sigma2).
/// sigma2 = 0 is accepted and gives the linear predictor.
Vector impute_column(const Matrix& completed, const IncompleteData& data, Index j,
                     const ConditionalRegression& regression, RngStream& rng);

/// Passed to the trace hook after each column update. References are valid
/// only for the duration of the call.
struct FcsTraceEvent {
  std::size_t chain = 0;
  std::size_t iteration = 0;  // 0-based sweep number
  std::size_t position = 0;   // position within the visit sequence
  Index column = 0;
  const Matrix& completed;
  const ConditionalRegression& drawn;  // the theta_j drawn for this update
};

using FcsTraceHook = std::function<void(const FcsTraceEvent&)>;

/// Conditional priors looked up by column; every incomplete column needs one.
class NigPriorSet {
 public:
  explicit NigPriorSet(std::vector<NigPrior> priors);
  static NigPriorSet from_joint(const NiwPrior& prior) {
    return NigPriorSet(decompose_all(prior));
  }

  bool has(Index j) const;
  const NigPrior& at(Index j) const;
  const std::vector<NigPrior>& all() const { return priors_; }

 private:
  std::vector<NigPrior> priors_;
};

/// Initializes missing cells by random draws from each column's observed
/// values and runs n_iter sweeps. Within a sweep each visited column is
/// refit on the rows where it is observed, regressing on the current values
/// of all other columns, and then re-imputed.
Matrix fcs_iterate(const IncompleteData& data, const NigPriorSet& priors,
                   const VisitSequence& visit, RngStream& rng, std::size_t n_iter,
                   const FcsTraceHook& hook = {}, std::size_t chain = 0);

/// m independent chains on child streams rng.child(k); each contributes its
/// dataset after n_burn sweeps.
std::vector<Matrix> fcs_impute(const IncompleteData& data, const NigPriorSet& priors,
                               const VisitSequence& visit, const RngStream& rng,
                               std::size_t n_burn, std::size_t m);

}  // namespace mibridge
