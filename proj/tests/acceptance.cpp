// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Seeds are fixed; tolerances are the constants below.

#include "mibridge/experiments.hpp"
#include "mibridge/harness.hpp"
#include "mibridge/jm_imputer.hpp"
#include "mibridge/serialization.hpp"

#include "oracles.hpp"
#include "sampler_checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace mibridge;

namespace {

constexpr std::uint64_t kSeed = 2021;

int n_failed = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
  std::printf("%s  criterion %d  %s  [%s]\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++n_failed;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

void coverage_criterion(int criterion, Mechanism mech, double bias_center, double bias_tol,
                        double cov_lo, double cov_hi, double width_lo, double width_hi) {
  ExperimentConfig config;
  config.design = SimulationDesign::reference(mech);
  config.seed = kSeed;
  config.n_replications = 500;
  config.method = MethodChoice::Both;
  const CoverageStudyResult res = run_coverage_study(config);
  for (const MethodCoverage& mc : res.methods) {
    const EvalSummary& s = mc.summary;
    const bool ok = std::abs(s.bias - bias_center) <= bias_tol &&
                    within(s.coverage, cov_lo, cov_hi) && within(s.ci_width, width_lo, width_hi) &&
                    !mc.log.run_failed();
    report(criterion,
           to_string(mech) + " coverage study, " + to_string(mc.method) + ", 500 replications",
           ok,
           fmt("bias %.4f, coverage %.3f, width %.4f", s.bias, s.coverage, s.ci_width) +
               fmt(", failed %.0f", static_cast<double>(mc.log.n_failed())));
  }
}

void order_effect_criterion() {
  const SimulationDesign design = SimulationDesign::reference();
  const OrderEffectSummary s = order_effect_experiment(design, kSeed, 500);
  const bool ok500 = s.n_completed >= 495 && s.exclusion_fraction <= 0.03;
  report(3, "order-effect null, 500 replications", ok500,
         fmt("%.0f of %.0f exclude zero, fraction %.4f", static_cast<double>(s.n_excluding),
             static_cast<double>(s.n_completed), s.exclusion_fraction));
  // Replication r depends only on (seed, r), so the first 100 are the
  // 100-replication run.
  std::size_t done = 0, excl = 0;
  for (std::size_t r = 0; r < 100; ++r) {
    if (!s.replications[r]) continue;
    ++done;
    if (s.replications[r]->result.excludes_zero) ++excl;
  }
  const double frac = done ? static_cast<double>(excl) / static_cast<double>(done) : 1.0;
  report(3, "order-effect null, 100 replications", done >= 99 && frac <= 0.05,
         fmt("%.0f of %.0f exclude zero, fraction %.4f", static_cast<double>(excl),
             static_cast<double>(done), frac));
}

void posterior_criterion() {
  const SimulationDesign design = SimulationDesign::reference();
  const PosteriorDraws d = posterior_draws(design, RngStream(kSeed));
  const PosteriorComparison c = posterior_compare(d.jm, d.fcs);
  report(4, "JM vs FCS coefficient draws, two-sample KS < 0.03", c.ks < 0.03,
         fmt("KS %.4f on %.0f draws each", c.ks, static_cast<double>(d.jm.size())));
  double worst = 0.0;
  for (std::size_t k = 4; k <= 94; ++k) {
    worst = std::max(worst, std::abs(c.qq_pairs[k].first - c.qq_pairs[k].second));
  }
  report(4, "JM vs FCS QQ pairs within 0.05 at percentiles 5..95", worst < 0.05,
         fmt("max deviation %.4f", worst));
}

void bridge_criterion() {
  const std::string text =
      R"({"type": "niw", "mu0": [0, 0, 0], "tau": 1, "m": 3,
          "lambda": [[60, 0, 0], [0, 60, 0], [0, 0, 60]]})";
  const Json doc = transform_prior(text, std::nullopt);
  using R = oracle::Rational;
  const oracle::RMatrix lam{{R(60), R(0), R(0)}, {R(0), R(60), R(0)}, {R(0), R(0), R(60)}};
  const std::vector<R> mu0{R(0), R(0), R(0)};
  const double published_cov[3] = {60.0, 3600.0, 3600.0};
  bool ok = doc["priors"].size() == 3;
  for (std::size_t j = 0; ok && j < 3; ++j) {
    const Json& p = doc["priors"][j];
    const oracle::RationalNig exact = oracle::rational_decompose(mu0, R(1), R(3), lam, j);
    ok = ok && p["sigma"]["df"].get<double>() == boost::rational_cast<double>(exact.sigma_df);
    ok = ok && p["sigma"]["scale"].get<double>() == boost::rational_cast<double>(exact.sigma_scale);
    ok = ok && p["sigma"]["df"].get<double>() == 3.0 && p["sigma"]["scale"].get<double>() == 60.0;
    for (std::size_t a = 0; a < 3; ++a) {
      ok = ok && p["coef_mean"][a].get<double>() == boost::rational_cast<double>(exact.coef_mean[a]);
      for (std::size_t b = 0; b < 3; ++b) {
        const double v = p["coef_covariance_at_sigma_scale"][a][b].get<double>();
        ok = ok && v == boost::rational_cast<double>(exact.coef_cov_at_scale[a][b]);
        ok = ok && v == (a == b ? published_cov[a] : 0.0);
      }
    }
  }
  report(5, "prior bridge on the reference prior is exact", ok,
         "sigma ~ W^-1(3, 60), coefficient covariance diag(60, 3600, 3600)");
}

Matrix random_spd(RngStream& rng, Index p) {
  Matrix a(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index k = 0; k < p; ++k) a(i, k) = rng.standard_normal();
  return a * a.transpose() / static_cast<double>(p) + 0.3 * Matrix::Identity(p, p);
}

void factorization_criterion() {
  RngStream rng(kSeed);
  double worst = 0.0;
  for (int prior_id = 0; prior_id < 50; ++prior_id) {
    const Index p = 2 + prior_id % 4;
    Vector mu0(p);
    for (Index i = 0; i < p; ++i) mu0(i) = 2.0 * rng.standard_normal();
    const NiwPrior prior(mu0, 0.2 + 3.0 * rng.uniform(), static_cast<double>(p) + 6.0 * rng.uniform(),
                         random_spd(rng, p));
    const Index j = static_cast<Index>(rng.index(static_cast<std::size_t>(p)));
    const PriorDecomposition dec = decompose(prior, j);
    double lo = INFINITY, hi = -INFINITY;
    for (int k = 0; k < 100; ++k) {
      Vector mu(p);
      for (Index i = 0; i < p; ++i) mu(i) = mu0(i) + rng.standard_normal();
      const GaussianParams theta(mu, random_spd(rng, p));
      const PartitionedGaussian part = partition(theta, j);
      const double diff = log_niw_density(prior, theta.mu(), theta.sigma()) -
                          log_factored_density(dec.conditional, dec.marginal, to_regression(part),
                                               GaussianParams(part.mu_rest, part.sigma_rest));
      lo = std::min(lo, diff);
      hi = std::max(hi, diff);
    }
    worst = std::max(worst, hi - lo);
  }
  report(6, "joint minus factored log prior is constant (50 priors x 100 points)", worst < 1e-8,
         fmt("max spread %.3e", worst));
}

void conjugacy_criterion() {
  const std::vector<double> xs{1, 2, 3, 4, 5}, ys{2, 4, 5, 4, 5};
  const oracle::LineFit hand = oracle::simple_ols(xs, ys);
  NigPrior flat;
  flat.j = 0;
  flat.sigma_df = 1.0;
  flat.sigma_scale = 1.0;
  flat.coef_mean = Vector::Zero(2);
  flat.coef_scale_given_sigma = 1e12 * Matrix::Identity(2, 2);
  Matrix x(5, 2);
  Vector y(5);
  for (int i = 0; i < 5; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = xs[i];
    y(i) = ys[i];
  }
  const NigPosterior post = nig_posterior_update(flat, x, y);
  const double e_nig = std::max(std::abs(post.coef_mean(0) - hand.intercept),
                                std::abs(post.coef_mean(1) - hand.slope));
  report(7, "NIG update in the flat-prior limit equals hand OLS", e_nig < 1e-8,
         fmt("max error %.3e", e_nig));

  const double mu0 = 0.0, tau = 1.0, m = 3.0, lambda = 1.0;
  const std::vector<double> data{1.0, 2.0, 3.0};
  const oracle::Moments grid = oracle::grid_posterior_mu_p1(mu0, tau, m, lambda, data);
  Matrix d(3, 1);
  d << 1, 2, 3;
  const NiwPrior np = niw_posterior_update(
      NiwPrior(Vector::Constant(1, mu0), tau, m, Matrix::Constant(1, 1, lambda)), d);
  const double mean = np.mu0()(0);
  const double var = np.covariance_scale()(0, 0) / (np.m() - 2.0) / np.tau();
  const double e_mean = std::abs(mean - grid.mean), e_var = std::abs(var - grid.variance);
  report(7, "NIW update for p = 1 equals numerical integration", e_mean < 1e-6 && e_var < 1e-6,
         fmt("mean error %.3e, variance error %.3e", e_mean, e_var));
}

void sampler_criterion() {
  const std::vector<checks::Check> all = checks::run_sampler_checks(kSeed, 100000);
  bool ok = true;
  std::string failed;
  for (const checks::Check& c : all) {
    if (!c.pass()) {
      ok = false;
      failed += " " + c.name;
    }
  }
  report(8, "sampler checks on 1e5 draws", ok,
         fmt("%.0f checks", static_cast<double>(all.size())) + (ok ? "" : ", failed:" + failed));
}

}  // namespace

int main() {
  bridge_criterion();
  factorization_criterion();
  conjugacy_criterion();
  sampler_criterion();
  posterior_criterion();
  order_effect_criterion();
  coverage_criterion(1, Mechanism::MCAR, 0.0, 0.03, 0.92, 0.98, 0.69, 0.79);
  coverage_criterion(2, Mechanism::MARr, -0.01, 0.04, 0.93, 0.99, 0.68, 0.78);
  std::printf("%s: %d failing line(s)\n", n_failed == 0 ? "ALL PASS" : "FAILURES", n_failed);
  return n_failed == 0 ? 0 : 1;
}
