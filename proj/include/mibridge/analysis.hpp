#pragma once

#include "mibridge/linalg.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace mibridge {

/// Complete-data estimate from one imputed dataset.
struct ImputationEstimate {
  double point = 0.0;
  double variance = 0.0;
};

/// Rubin's-rules combination of m complete-data estimates.
struct PooledEstimate {
  double qbar = 0.0;   // pooled point estimate
  double ubar = 0.0;   // mean within-imputation variance
  double b = 0.0;      // between-imputation variance
  double t_var = 0.0;  // ubar + (1 + 1/m) b
  double df = 0.0;     // +inf when b == 0
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t m = 0;
};

/// Requires m >= 2 and positive variances. The reference distribution is
/// t with df = (m - 1)(1 + ubar / ((1 + 1/m) b))^2, or normal when b = 0.
PooledEstimate pool(std::span<const ImputationEstimate> estimates, double level = 0.95);

/// Mean of column j and its sampling variance s^2 / n.
ImputationEstimate column_mean_estimate(const Matrix& completed, Index j);

struct EvalSummary {
  double bias = 0.0;
  double coverage = 0.0;
  double ci_width = 0.0;
  std::size_t n_reps = 0;
};

EvalSummary evaluate(std::span<const PooledEstimate> results, double truth);

/// Batch-means inference for the mean of a (possibly autocorrelated)
/// trace, reported relative to mean_null.
struct OrderEffectResult {
  double mean_diff = 0.0;  // mean(trace) - mean_null
  double se = 0.0;
  double ci_low = 0.0;     // interval for mean(trace) - mean_null
  double ci_high = 0.0;
  bool excludes_zero = false;
};

/// Splits the trace into n_batches contiguous equal batches;
/// se = sd(batch means) / sqrt(n_batches) and the interval uses the t
/// quantile with n_batches - 1 df. Throws on a length not divisible by
/// n_batches, fewer than two batches, or se = 0.
OrderEffectResult batch_means_ci(std::span<const double> trace, std::size_t n_batches,
                                 double mean_null = 0.0, double level = 0.95);

/// Two-sided quantile of Student's t (df = +inf gives the normal).
double t_quantile(double prob, double df);

/// Linear-interpolation (type 7) sample quantile of sorted data.
double sorted_quantile(std::span<const double> sorted, double prob);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

struct PosteriorComparison {
  double ks = 0.0;
  /// (quantile of a, quantile of b) at percentiles 1..99.
  std::vector<std::pair<double, double>> qq_pairs;
};

/// Both inputs need at least 100 draws.
PosteriorComparison posterior_compare(std::span<const double> draws_a,
                                      std::span<const double> draws_b);

/// Least-squares coefficients of y on the columns of x.
Vector ols_fit(const Matrix& x, const Vector& y);

/// OLS slopes of column `response` on an intercept plus `predictors`.
Vector regression_coefficients(const Matrix& data, Index response, const IndexList& predictors);

}  // namespace mibridge
