#include <doctest.h>

#include "mibridge/amputation.hpp"

#include <cmath>

using namespace mibridge;

namespace {

GaussianParams reference() {
  Vector mu(3);
  mu << 1, 4, 9;
  Matrix s(3, 3);
  s << 4, 2, 2, 2, 4, 2, 2, 2, 9;
  return GaussianParams(mu, s);
}

double correlation(const Vector& a, const Vector& b) {
  const Vector ca = a.array() - a.mean();
  const Vector cb = b.array() - b.mean();
  return ca.dot(cb) / std::sqrt(ca.squaredNorm() * cb.squaredNorm());
}

}  // namespace

TEST_CASE("generated data: means near the population and reproducible") {
  RngStream a(1), b(1);
  const Matrix x = generate_complete(a, 200, reference());
  CHECK(x == generate_complete(b, 200, reference()));
  for (Index j = 0; j < 3; ++j) {
    const double sd = std::sqrt(reference().sigma()(j, j));
    CHECK(std::abs(x.col(j).mean() - reference().mu()(j)) < 4.0 * sd / std::sqrt(200.0));
  }
}

TEST_CASE("sample covariance of 1e5 generated rows is within 5% of Sigma") {
  RngStream rng(2);
  const Matrix x = generate_complete(rng, 100000, reference());
  const Matrix c = x.rowwise() - x.colwise().mean();
  const Matrix cov = c.transpose() * c / (x.rows() - 1.0);
  CHECK(((cov - reference().sigma()).array() / reference().sigma().array()).abs().maxCoeff() < 0.05);
}

TEST_CASE("MCAR at 50%: about 100 incomplete rows with equal pattern shares") {
  RngStream rng(3);
  const Matrix x = generate_complete(rng, 200, reference());
  const IncompleteData d = ampute(rng, x, AmputationSpec::equal_patterns(Mechanism::MCAR, 0.5, 3));
  Index incomplete = 0;
  for (const MissingPattern& p : d.patterns()) {
    CHECK(p.missing.size() == 1);
    incomplete += static_cast<Index>(p.rows.size());
    CHECK(std::abs(double(p.rows.size()) - 200.0 / 6.0) < 4.0 * std::sqrt(200.0 * (1.0 / 6) * (5.0 / 6)));
  }
  CHECK(std::abs(double(incomplete) - 100.0) < 4.0 * std::sqrt(50.0));
  CHECK(d.column_names() == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("a vanishing proportion leaves the data complete") {
  RngStream rng(4);
  const Matrix x = generate_complete(rng, 500, reference());
  for (Mechanism mech : {Mechanism::MCAR, Mechanism::MARr}) {
    const IncompleteData d = ampute(rng, x, AmputationSpec::equal_patterns(mech, 1e-12, 3));
    CHECK(d.missing_count() == 0);
  }
}

TEST_CASE("realized missingness per column converges to prop * weight") {
  RngStream rng(5);
  const Index n = 100000;
  const Matrix x = generate_complete(rng, n, reference());
  AmputationSpec spec;
  spec.prop_missing_rows = 0.5;
  spec.patterns = {{0, 0.2}, {1, 0.5}, {2, 0.3}};
  for (Mechanism mech : {Mechanism::MCAR, Mechanism::MARr}) {
    spec.mechanism = mech;
    const IncompleteData d = ampute(rng, x, spec);
    for (const AmputationPattern& p : spec.patterns) {
      const double expect = spec.prop_missing_rows * p.weight;
      const double got = static_cast<double>(d.missing_rows(p.column).size()) / n;
      INFO(to_string(mech), " column ", p.column);
      CHECK(std::abs(got - expect) < 4.0 * std::sqrt(expect * (1 - expect) / n));
    }
    for (Index i = 0; i < n; ++i) CHECK_FALSE(d.mask().row(i).count() > 1);
  }
}

TEST_CASE("MCAR deletion is uncorrelated with the values") {
  RngStream rng(6);
  const Index n = 100000;
  const Matrix x = generate_complete(rng, n, reference());
  const IncompleteData d = ampute(rng, x, AmputationSpec::equal_patterns(Mechanism::MCAR, 0.5, 3));
  for (Index j = 0; j < 3; ++j) {
    for (Index k = 0; k < 3; ++k) {
      const Vector ind = d.mask().col(j).cast<double>();
      CHECK(std::abs(correlation(ind, x.col(k))) < 0.02);
    }
  }
}

TEST_CASE("MARr deletes larger values of y more often") {
  RngStream rng(7);
  const Index n = 10000;
  const Matrix x = generate_complete(rng, n, reference());
  AmputationSpec spec;
  spec.mechanism = Mechanism::MARr;
  spec.prop_missing_rows = 0.5;
  spec.patterns = {{1, 1.0}};
  const IncompleteData d = ampute(rng, x, spec);
  double s_del = 0, s_ret = 0, q_del = 0, q_ret = 0;
  double n_del = 0, n_ret = 0;
  for (Index i = 0; i < n; ++i) {
    const double y = x(i, 1);
    if (d.missing(i, 1)) {
      s_del += y;
      q_del += y * y;
      ++n_del;
    } else {
      s_ret += y;
      q_ret += y * y;
      ++n_ret;
    }
  }
  const double m_del = s_del / n_del, m_ret = s_ret / n_ret;
  const double v_del = q_del / n_del - m_del * m_del, v_ret = q_ret / n_ret - m_ret * m_ret;
  const double z = (m_del - m_ret) / std::sqrt(v_del / n_del + v_ret / n_ret);
  CHECK(z > 3.09);  // one-sided 0.001
}

TEST_CASE("amputation is reproducible") {
  RngStream g(8);
  const Matrix x = generate_complete(g, 100, reference());
  RngStream a(9), b(9);
  const auto spec = AmputationSpec::equal_patterns(Mechanism::MARr, 0.5, 3);
  CHECK((ampute(a, x, spec).mask() == ampute(b, x, spec).mask()).all());
}

TEST_CASE("amputation spec validation") {
  RngStream rng(10);
  const Matrix x = generate_complete(rng, 10, reference());
  AmputationSpec spec = AmputationSpec::equal_patterns(Mechanism::MCAR, 0.5, 3);
  spec.patterns.push_back({3, 0.0});
  CHECK_THROWS_AS(ampute(rng, x, spec), std::invalid_argument);
  spec = AmputationSpec::equal_patterns(Mechanism::MCAR, 0.5, 3);
  spec.patterns[0].weight = 0.5;
  CHECK_THROWS_AS(spec.validate(3), std::invalid_argument);
  spec = AmputationSpec::equal_patterns(Mechanism::MCAR, 1.0, 3);
  CHECK_THROWS_AS(spec.validate(3), std::invalid_argument);
  spec = AmputationSpec::equal_patterns(Mechanism::MCAR, 0.5, 3);
  spec.patterns[1].column = 0;
  CHECK_THROWS_AS(spec.validate(3), std::invalid_argument);

  CHECK(mechanism_from_string("MARr") == Mechanism::MARr);
  CHECK(mechanism_from_string("mcar") == Mechanism::MCAR);
  CHECK_THROWS(mechanism_from_string("MNAR"));
}
