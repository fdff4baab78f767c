#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace mibridge {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;
using Cholesky = Eigen::LLT<Matrix>;

/// Raised when a matrix that must be symmetric positive definite is not,
/// or when a triangular solve meets a singular factor.
class NotPositiveDefinite : public std::runtime_error {
 public:
  explicit NotPositiveDefinite(const std::string& what)
      : std::runtime_error("not positive definite: " + what) {}
};

/// Raised when a matrix deviates from symmetry by more than the accepted
/// rounding-level tolerance.
class NotSymmetric : public std::invalid_argument {
 public:
  explicit NotSymmetric(const std::string& what)
      : std::invalid_argument("not symmetric: " + what) {}
};

inline constexpr double kSymmetryTolerance = 1e-10;

/// Returns (A + A^T) / 2 when A is square and its relative asymmetry is
/// below kSymmetryTolerance; throws NotSymmetric otherwise. An exactly
/// symmetric input is returned bit-identical.
Matrix symmetrized(const Matrix& a, const std::string& what);

/// Cholesky factorization; throws NotPositiveDefinite on failure.
Cholesky cholesky(const Matrix& a, const std::string& what);

double log_det(const Cholesky& chol);

/// A^{-1} from its Cholesky factor, symmetrized.
Matrix spd_inverse(const Cholesky& chol);

/// Ascending list {0, ..., p-1} without j.
IndexList complement_of(Index p, Index j);

/// Ascending complement of a sorted index set within {0, ..., p-1}.
IndexList complement_of(Index p, const IndexList& idx);

/// Rows `rows` and columns `cols` of `a`, in the listed order.
Matrix submatrix(const Matrix& a, const IndexList& rows, const IndexList& cols);

Vector subvector(const Vector& v, const IndexList& idx);

}  // namespace mibridge
