#include "mibridge/analysis.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mibridge {

double t_quantile(double prob, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("t_quantile: df must be positive");
  if (std::isinf(df)) {
    return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
  }
  return boost::math::quantile(boost::math::students_t_distribution<double>(df), prob);
}

PooledEstimate pool(std::span<const ImputationEstimate> estimates, double level) {
  const std::size_t m = estimates.size();
  if (m < 2) throw std::invalid_argument("pool: need at least two imputations");
  for (const auto& e : estimates) {
    if (!(e.variance > 0.0)) throw std::invalid_argument("pool: variances must be positive");
  }
  const double md = static_cast<double>(m);
  PooledEstimate out;
  out.m = m;
  for (const auto& e : estimates) {
    out.qbar += e.point;
    out.ubar += e.variance;
  }
  out.qbar /= md;
  out.ubar /= md;
  for (const auto& e : estimates) out.b += (e.point - out.qbar) * (e.point - out.qbar);
  out.b /= md - 1.0;
  const double inflated_b = (1.0 + 1.0 / md) * out.b;
  out.t_var = out.ubar + inflated_b;
  if (out.b > 0.0) {
    const double ratio = 1.0 + out.ubar / inflated_b;
    out.df = (md - 1.0) * ratio * ratio;
  } else {
    out.df = std::numeric_limits<double>::infinity();
  }
  const double half = t_quantile(0.5 + 0.5 * level, out.df) * std::sqrt(out.t_var);
  out.ci_low = out.qbar - half;
  out.ci_high = out.qbar + half;
  return out;
}

ImputationEstimate column_mean_estimate(const Matrix& completed, Index j) {
  const Index n = completed.rows();
  if (n < 2) throw std::invalid_argument("column_mean_estimate: need two rows");
  const double mean = completed.col(j).mean();
  const double ss = (completed.col(j).array() - mean).square().sum();
  const double var = ss / static_cast<double>(n - 1);
  return {mean, var / static_cast<double>(n)};
}

EvalSummary evaluate(std::span<const PooledEstimate> results, double truth) {
  if (results.empty()) throw std::invalid_argument("evaluate: no replications");
  EvalSummary s;
  s.n_reps = results.size();
  std::size_t covered = 0;
  for (const auto& r : results) {
    s.bias += r.qbar;
    s.ci_width += r.ci_high - r.ci_low;
    if (r.ci_low <= truth && truth <= r.ci_high) ++covered;
  }
  const double n = static_cast<double>(results.size());
  s.bias = s.bias / n - truth;
  s.ci_width /= n;
  s.coverage = static_cast<double>(covered) / n;
  return s;
}

OrderEffectResult batch_means_ci(std::span<const double> trace, std::size_t n_batches,
                                 double mean_null, double level) {
  if (n_batches < 2) throw std::invalid_argument("batch_means_ci: need at least two batches");
  if (trace.empty() || trace.size() % n_batches != 0) {
    throw std::invalid_argument("batch_means_ci: trace length " +
                                std::to_string(trace.size()) +
                                " is not a positive multiple of " +
                                std::to_string(n_batches));
  }
  const std::size_t len = trace.size() / n_batches;
  std::vector<double> means(n_batches);
  for (std::size_t b = 0; b < n_batches; ++b) {
    const auto first = trace.begin() + static_cast<std::ptrdiff_t>(b * len);
    means[b] = std::accumulate(first, first + static_cast<std::ptrdiff_t>(len), 0.0) /
               static_cast<double>(len);
  }
  const double nb = static_cast<double>(n_batches);
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / nb;
  double ss = 0.0;
  for (double x : means) ss += (x - grand) * (x - grand);
  OrderEffectResult r;
  r.se = std::sqrt(ss / (nb - 1.0)) / std::sqrt(nb);
  if (!(r.se > 0.0)) {
    throw std::invalid_argument("batch_means_ci: zero batch-means standard error");
  }
  r.mean_diff = grand - mean_null;
  const double half = t_quantile(0.5 + 0.5 * level, nb - 1.0) * r.se;
  r.ci_low = r.mean_diff - half;
  r.ci_high = r.mean_diff + half;
  r.excludes_zero = r.ci_low > 0.0 || r.ci_high < 0.0;
  return r;
}

double sorted_quantile(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

PosteriorComparison posterior_compare(std::span<const double> draws_a,
                                      std::span<const double> draws_b) {
  if (draws_a.size() < 100 || draws_b.size() < 100) {
    throw std::invalid_argument("posterior_compare: need at least 100 draws per sampler");
  }
  PosteriorComparison out;
  out.ks = ks_statistic(draws_a, draws_b);
  std::vector<double> sa(draws_a.begin(), draws_a.end());
  std::vector<double> sb(draws_b.begin(), draws_b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  out.qq_pairs.reserve(99);
  for (int pct = 1; pct <= 99; ++pct) {
    const double prob = pct / 100.0;
    out.qq_pairs.emplace_back(sorted_quantile(sa, prob), sorted_quantile(sb, prob));
  }
  return out;
}

Vector ols_fit(const Matrix& x, const Vector& y) {
  if (x.rows() != y.size()) throw std::invalid_argument("ols_fit: length mismatch");
  const auto qr = x.colPivHouseholderQr();
  if (qr.rank() < x.cols()) {
    throw NotPositiveDefinite("rank-deficient regression design");
  }
  return qr.solve(y);
}

Vector regression_coefficients(const Matrix& data, Index response, const IndexList& predictors) {
  Matrix x(data.rows(), static_cast<Index>(predictors.size()) + 1);
  x.col(0).setOnes();
  x.rightCols(static_cast<Index>(predictors.size())) = data(Eigen::all, predictors);
  return ols_fit(x, data.col(response));
}

}  // namespace mibridge
