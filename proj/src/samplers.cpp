#include "mibridge/samplers.hpp"

#include <cmath>
#include <string>

namespace mibridge {

namespace {

// Lower-triangular Bartlett factor A with A A^T ~ Wishart(df, I_p).
Matrix bartlett_factor(RngStream& rng, double df, Index p) {
  Matrix a = Matrix::Zero(p, p);
  for (Index i = 0; i < p; ++i) {
    a(i, i) = std::sqrt(rng.chi_squared(df - static_cast<double>(i)));
    for (Index k = 0; k < i; ++k) {
      a(i, k) = rng.standard_normal();
    }
  }
  return a;
}

void check_wishart_df(double df, Index p, double minimum) {
  if (!(df >= minimum)) {
    throw std::invalid_argument("Wishart df " + std::to_string(df) +
                                " below dimension bound for p = " +
                                std::to_string(p));
  }
}

}  // namespace

Vector draw_mvn(RngStream& rng, const GaussianParams& params) {
  return draw_mvn(rng, params.mu(), params.chol().matrixL());
}

Vector draw_mvn(RngStream& rng, const Vector& mean, const Matrix& lower_factor) {
  Vector z(mean.size());
  for (Index i = 0; i < z.size(); ++i) z(i) = rng.standard_normal();
  return mean + lower_factor.triangularView<Eigen::Lower>() * z;
}

Matrix draw_wishart(RngStream& rng, double df, const Matrix& scale) {
  const Index p = scale.rows();
  check_wishart_df(df, p, static_cast<double>(p) - 1.0 + 1e-12);
  const Cholesky chol = cholesky(symmetrized(scale, "Wishart scale"), "Wishart scale");
  const Matrix la = chol.matrixL() * bartlett_factor(rng, df, p);
  Matrix w = la * la.transpose();
  return 0.5 * (w + w.transpose());
}

Matrix draw_inv_wishart(RngStream& rng, double df, const Matrix& scale) {
  const Index p = scale.rows();
  check_wishart_df(df, p, static_cast<double>(p));
  const Cholesky chol =
      cholesky(symmetrized(scale, "inverse-Wishart scale"), "inverse-Wishart scale");
  // With scale = C C^T and A the Bartlett factor, Sigma = C A^{-T} A^{-1} C^T.
  const Matrix a = bartlett_factor(rng, df, p);
  const Matrix c = chol.matrixL();
  const Matrix x = a.triangularView<Eigen::Lower>().solve(c.transpose());
  Matrix sigma = x.transpose() * x;
  return 0.5 * (sigma + sigma.transpose());
}

double draw_inv_gamma(RngStream& rng, double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw std::invalid_argument("inverse gamma needs positive shape and scale");
  }
  return scale / rng.standard_gamma(shape);
}

Vector draw_mv_student_t(RngStream& rng, const Vector& loc, const Matrix& scale,
                         double df) {
  if (!(df > 0.0)) throw std::invalid_argument("Student t df must be positive");
  if (scale.rows() != loc.size()) {
    throw std::invalid_argument("Student t: location and scale dimensions differ");
  }
  const Cholesky chol = cholesky(symmetrized(scale, "Student t scale"), "Student t scale");
  Vector z(loc.size());
  for (Index i = 0; i < z.size(); ++i) z(i) = rng.standard_normal();
  const double g = rng.chi_squared(df);
  const Vector lz = chol.matrixL() * z;
  return loc + std::sqrt(df / g) * lz;
}

}  // namespace mibridge
