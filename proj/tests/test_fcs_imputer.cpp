#include <doctest.h>

#include "oracles.hpp"

#include "mibridge/amputation.hpp"
#include "mibridge/analysis.hpp"
#include "mibridge/fcs_imputer.hpp"
#include "mibridge/jm_imputer.hpp"
#include "mibridge/samplers.hpp"

#include <cmath>
#include <set>

using namespace mibridge;

namespace {

GaussianParams reference() {
  Vector mu(3);
  mu << 1, 4, 9;
  Matrix s(3, 3);
  s << 4, 2, 2, 2, 4, 2, 2, 2, 9;
  return GaussianParams(mu, s);
}

NiwPrior reference_prior() {
  return NiwPrior(Vector::Zero(3), 1.0, 3.0, 60.0 * Matrix::Identity(3, 3));
}

NigPrior flat_prior(Index k) {
  NigPrior p;
  p.j = 0;
  p.sigma_df = 1.0;
  p.sigma_scale = 1.0;
  p.coef_mean = Vector::Zero(k);
  p.coef_scale_given_sigma = 1e12 * Matrix::Identity(k, k);
  return p;
}

Matrix with_intercept(const Matrix& x) {
  Matrix out(x.rows(), x.cols() + 1);
  out.col(0).setOnes();
  out.rightCols(x.cols()) = x;
  return out;
}

IncompleteData amputed(std::uint64_t seed, Index n = 200) {
  RngStream rng(seed);
  const Matrix full = generate_complete(rng, n, reference());
  return ampute(rng, full, AmputationSpec::equal_patterns(Mechanism::MCAR, 0.5, 3));
}

}  // namespace

TEST_CASE("flat-prior limit of the NIG update is the hand OLS fit") {
  const std::vector<double> xs{1, 2, 3, 4, 5}, ys{2, 4, 5, 4, 5};
  const oracle::LineFit hand = oracle::simple_ols(xs, ys);
  REQUIRE(hand.slope == doctest::Approx(0.6));
  REQUIRE(hand.intercept == doctest::Approx(2.2));
  Matrix x(5, 1);
  Vector y(5);
  for (int i = 0; i < 5; ++i) {
    x(i, 0) = xs[i];
    y(i) = ys[i];
  }
  const NigPosterior post = nig_posterior_update(flat_prior(2), with_intercept(x), y);
  CHECK(std::abs(post.coef_mean(0) - hand.intercept) < 1e-8);
  CHECK(std::abs(post.coef_mean(1) - hand.slope) < 1e-8);
  CHECK(post.sigma_df == 6.0);
}

TEST_CASE("flat-prior limit with two predictors matches the normal equations") {
  RngStream rng(3);
  std::vector<std::vector<double>> rows;
  std::vector<double> ys;
  Matrix x(12, 2);
  Vector y(12);
  for (int i = 0; i < 12; ++i) {
    x(i, 0) = rng.standard_normal();
    x(i, 1) = 2.0 * rng.standard_normal() + 1.0;
    y(i) = 0.5 - x(i, 0) + 0.3 * x(i, 1) + rng.standard_normal();
    rows.push_back({x(i, 0), x(i, 1)});
    ys.push_back(y(i));
  }
  const std::vector<double> ols = oracle::normal_equations_ols(rows, ys);
  const NigPosterior post = nig_posterior_update(flat_prior(3), with_intercept(x), y);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(post.coef_mean(k) - ols[k]) < 1e-8);
}

TEST_CASE("NIG update with no rows equals the prior") {
  const NigPrior prior = decompose(reference_prior(), 1).conditional;
  const NigPosterior post = nig_posterior_update(prior, Matrix(0, 3), Vector(0));
  CHECK(post.coef_mean == prior.coef_mean);
  CHECK(post.sigma_df == prior.sigma_df);
  CHECK(post.sigma_scale == doctest::Approx(1.0 / prior.sigma_scale));
  const Matrix precision = post.coef_precision_chol.reconstructedMatrix();
  CHECK((precision * prior.coef_scale_given_sigma - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("posterior slopes of y on x, z cover the true (7/16, 1/8)") {
  RngStream rng(21);
  const Matrix full = generate_complete(rng, 200, reference());
  const NigPrior prior = decompose(reference_prior(), 1).conditional;
  Matrix x(200, 2);
  x.col(0) = full.col(0);
  x.col(1) = full.col(2);
  const NigPosterior post = nig_posterior_update(prior, with_intercept(x), full.col(1));
  const Matrix cov = post.coef_precision_chol.solve(Matrix::Identity(3, 3)) *
                     (post.sigma_scale / (post.sigma_df - 2.0));
  const double truth[2] = {7.0 / 16.0, 1.0 / 8.0};
  for (int k = 0; k < 2; ++k) {
    CHECK(std::abs(post.coef_mean(k + 1) - truth[k]) < 3.0 * std::sqrt(cov(k + 1, k + 1)));
  }
}

TEST_CASE("compound regression draws follow the posterior t marginal") {
  RngStream gen(4);
  const Matrix full = generate_complete(gen, 15, reference());
  const NigPrior prior = decompose(reference_prior(), 2).conditional;
  const NigPosterior post = nig_posterior_update(prior, with_intercept(full.leftCols(2)), full.col(2));
  const Matrix scale = post.coef_precision_chol.solve(Matrix::Identity(3, 3)) *
                       (post.sigma_scale / post.sigma_df);
  const std::size_t n = 100000;
  RngStream a(5), b(6);
  std::vector<std::vector<double>> drawn(3, std::vector<double>(n)), direct(3, std::vector<double>(n));
  double min_sigma = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ConditionalRegression r = draw_regression(post, a);
    min_sigma = std::min(min_sigma, r.sigma2);
    const Vector t = draw_mv_student_t(b, post.coef_mean, scale, post.sigma_df);
    drawn[0][i] = r.alpha;
    drawn[1][i] = r.beta(0);
    drawn[2][i] = r.beta(1);
    for (int k = 0; k < 3; ++k) direct[k][i] = t(k);
  }
  CHECK(min_sigma > 0.0);
  for (int k = 0; k < 3; ++k) CHECK(ks_statistic(drawn[k], direct[k]) < 0.015);

  RngStream c(5);
  const ConditionalRegression again = draw_regression(post, c);
  RngStream d(5);
  CHECK(draw_regression(post, d).alpha == again.alpha);
}

TEST_CASE("impute_column: zero variance gives the linear predictor") {
  const IncompleteData data = amputed(2);
  RngStream rng(1);
  const Matrix completed = initialize_by_observed_draws(data, rng);
  const ConditionalRegression reg{1.5, Vector((Vector(2) << 0.25, -0.5).finished()), 0.0};
  const Vector col = impute_column(completed, data, 1, reg, rng);
  for (Index i = 0; i < data.rows(); ++i) {
    if (data.missing(i, 1)) {
      CHECK(col(i) ==
            doctest::Approx(1.5 + 0.25 * completed(i, 0) - 0.5 * completed(i, 2)).epsilon(1e-14));
    } else {
      CHECK(col(i) == data.values()(i, 1));
    }
  }
}

TEST_CASE("impute_column with beta = 0 draws iid N(c, 1)") {
  const Index n = 20000;
  Matrix values(n, 2);
  Mask mask = Mask::Constant(n, 2, false);
  RngStream rng(9);
  for (Index i = 0; i < n; ++i) {
    values(i, 0) = rng.standard_normal();
    values(i, 1) = 0.0;
    mask(i, 1) = i % 2 == 0;
  }
  const IncompleteData data(values, mask, {"a", "b"});
  const Matrix completed = initialize_by_observed_draws(data, rng);
  const ConditionalRegression reg{3.0, Vector::Zero(1), 1.0};
  const Vector col = impute_column(completed, data, 1, reg, rng);
  double sum = 0, sq = 0;
  Index k = 0;
  for (Index i = 0; i < n; i += 2, ++k) {
    sum += col(i);
    sq += (col(i) - 3.0) * (col(i) - 3.0);
  }
  CHECK(std::abs(sum / k - 3.0) < 4.0 / std::sqrt(double(k)));
  CHECK(std::abs(sq / k - 1.0) < 0.05);
}

TEST_CASE("zero sweeps leave only the observed-value initialization") {
  const IncompleteData data = amputed(11);
  const NigPriorSet priors = NigPriorSet::from_joint(reference_prior());
  RngStream rng(3);
  const Matrix out = fcs_iterate(data, priors, VisitSequence::ascending(data), rng, 0);
  CHECK(data.agrees_on_observed(out));
  for (Index j = 0; j < 3; ++j) {
    std::set<double> observed;
    for (Index i : data.observed_rows(j)) observed.insert(data.values()(i, j));
    for (Index i : data.missing_rows(j)) CHECK(observed.count(out(i, j)) == 1);
  }
}

TEST_CASE("hook fires after every column update in visit order") {
  const IncompleteData data = amputed(12, 60);
  const NigPriorSet priors = NigPriorSet::from_joint(reference_prior());
  const VisitSequence visit = VisitSequence::from_names(data, {"z", "x", "y"});
  std::vector<std::pair<std::size_t, Index>> seen;
  RngStream rng(4);
  fcs_iterate(data, priors, visit, rng, 3,
              [&](const FcsTraceEvent& ev) {
                CHECK(ev.chain == 7u);
                CHECK(ev.column == visit.order()[ev.position]);
                CHECK(data.agrees_on_observed(ev.completed));
                seen.emplace_back(ev.iteration, ev.column);
              },
              7);
  REQUIRE(seen.size() == 9);
  CHECK(seen[0] == std::make_pair(std::size_t{0}, Index{2}));
  CHECK(seen[1] == std::make_pair(std::size_t{0}, Index{0}));
  CHECK(seen[2] == std::make_pair(std::size_t{0}, Index{1}));
  CHECK(seen[8].first == 2u);
}

TEST_CASE("fcs_impute: reproducible, observed cells kept, complete data copied") {
  const IncompleteData data = amputed(13);
  const NigPriorSet priors = NigPriorSet::from_joint(reference_prior());
  const VisitSequence visit = VisitSequence::from_names(data, {"z", "x", "y"});
  const auto a = fcs_impute(data, priors, visit, RngStream(1), 10, 5);
  const auto b = fcs_impute(data, priors, visit, RngStream(1), 10, 5);
  REQUIRE(a.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(a[k] == b[k]);
    CHECK(data.agrees_on_observed(a[k]));
  }
  CHECK(a[0] != a[1]);

  RngStream gen(2);
  const Matrix full = generate_complete(gen, 30, reference());
  const IncompleteData complete = IncompleteData::complete(full, {"x", "y", "z"});
  const auto copies = fcs_impute(complete, priors, VisitSequence::ascending(complete), RngStream(1), 10, 3);
  REQUIRE(copies.size() == 3);
  for (const Matrix& c : copies) CHECK(c == full);
}

TEST_CASE("bivariate FCS and JM imputations agree in distribution") {
  Matrix s(2, 2);
  s << 1.0, 0.6, 0.6, 2.0;
  const GaussianParams pop(Vector((Vector(2) << 0.0, 1.0).finished()), s);
  RngStream gen(14);
  const Matrix full = generate_complete(gen, 100, pop);
  const IncompleteData data =
      ampute(gen, full, AmputationSpec::equal_patterns(Mechanism::MCAR, 0.4, 2), {"a", "b"});
  const NiwPrior prior(Vector::Zero(2), 0.01, 2.0, 100.0 * Matrix::Identity(2, 2));
  const std::size_t burn = 50, iters = 4000;

  std::vector<double> fcs_draws;
  RngStream frng(15);
  fcs_iterate(data, NigPriorSet::from_joint(prior), VisitSequence::ascending(data), frng, burn + iters,
              [&](const FcsTraceEvent& ev) {
                if (ev.iteration < burn || ev.position != 1) return;
                for (Index i : data.missing_rows(1)) fcs_draws.push_back(ev.completed(i, 1));
              });
  std::vector<double> jm_draws;
  RngStream jrng(16);
  JmState state = jm_initialize(data, prior, jrng);
  for (std::size_t t = 0; t < burn + iters; ++t) {
    state = jm_gibbs_step(state, data, prior, jrng);
    if (t < burn) continue;
    for (Index i : data.missing_rows(1)) jm_draws.push_back(state.completed(i, 1));
  }
  REQUIRE(fcs_draws.size() == jm_draws.size());
  CHECK(ks_statistic(fcs_draws, jm_draws) < 0.03);
}

TEST_CASE("visit sequences and prior sets are validated") {
  const IncompleteData data = amputed(17);
  CHECK_THROWS_AS(VisitSequence(data, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(VisitSequence(data, {0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(VisitSequence::from_names(data, {"z", "x", "y", "z"}), std::invalid_argument);
  CHECK_THROWS(VisitSequence::from_names(data, {"z", "x", "w"}));
  CHECK(VisitSequence::from_names(data, {"z", "x", "y"}).order() == IndexList{2, 0, 1});

  std::vector<NigPrior> two = decompose_all(reference_prior());
  two.pop_back();
  RngStream rng(1);
  CHECK_THROWS(fcs_iterate(data, NigPriorSet(two), VisitSequence::ascending(data), rng, 1));
  std::vector<NigPrior> dup = decompose_all(reference_prior());
  dup[2] = dup[1];
  CHECK_THROWS_AS(NigPriorSet{dup}, std::invalid_argument);
}
