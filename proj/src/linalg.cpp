#include "mibridge/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace mibridge {

Matrix symmetrized(const Matrix& a, const std::string& what) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(what + ": matrix is not square");
  }
  if (!a.allFinite()) {
    throw std::invalid_argument(what + ": matrix has non-finite entries");
  }
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1.0);
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale) {
    throw NotSymmetric(what);
  }
  if (asym == 0.0) {
    return a;
  }
  return 0.5 * (a + a.transpose());
}

Cholesky cholesky(const Matrix& a, const std::string& what) {
  Cholesky chol(a);
  if (chol.info() != Eigen::Success) {
    throw NotPositiveDefinite(what);
  }
  // Eigen's LLT reports success on some semidefinite inputs; require a
  // strictly positive, finite diagonal.
  const auto diag = chol.matrixLLT().diagonal();
  if (!diag.allFinite() || (diag.array() <= 0.0).any()) {
    throw NotPositiveDefinite(what);
  }
  return chol;
}

double log_det(const Cholesky& chol) {
  return 2.0 * chol.matrixLLT().diagonal().array().log().sum();
}

Matrix spd_inverse(const Cholesky& chol) {
  const Index p = chol.matrixLLT().rows();
  Matrix inv = chol.solve(Matrix::Identity(p, p));
  return 0.5 * (inv + inv.transpose());
}

IndexList complement_of(Index p, Index j) {
  IndexList out;
  out.reserve(static_cast<std::size_t>(p > 0 ? p - 1 : 0));
  for (Index k = 0; k < p; ++k) {
    if (k != j) out.push_back(k);
  }
  return out;
}

IndexList complement_of(Index p, const IndexList& idx) {
  IndexList out;
  for (Index k = 0; k < p; ++k) {
    if (!std::binary_search(idx.begin(), idx.end(), k)) out.push_back(k);
  }
  return out;
}

Matrix submatrix(const Matrix& a, const IndexList& rows, const IndexList& cols) {
  return a(rows, cols);
}

Vector subvector(const Vector& v, const IndexList& idx) { return v(idx); }

}  // namespace mibridge
