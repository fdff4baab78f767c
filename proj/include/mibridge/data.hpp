#pragma once

#include "mibridge/linalg.hpp"

#include <string>
#include <vector>

namespace mibridge {

class RngStream;

using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Rows sharing one missingness pattern.
struct MissingPattern {
  IndexList missing;   // ascending column indices
  IndexList observed;  // ascending complement
  IndexList rows;      // ascending row indices
};

/// An n x p data matrix with a missingness mask (true = missing). Masked
/// cells hold NaN. Rows that are fully observed are not listed in
/// patterns().
class IncompleteData {
 public:
  IncompleteData(Matrix values, Mask mask, std::vector<std::string> column_names);

  /// Fully observed data; missing cells none.
  static IncompleteData complete(Matrix values, std::vector<std::string> column_names);

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  const Mask& mask() const { return mask_; }
  bool missing(Index i, Index j) const { return mask_(i, j); }
  const std::vector<std::string>& column_names() const { return names_; }
  const std::vector<MissingPattern>& patterns() const { return patterns_; }

  /// Columns with at least one missing cell, ascending.
  IndexList incomplete_columns() const;
  IndexList observed_rows(Index j) const;
  IndexList missing_rows(Index j) const;
  Index missing_count() const { return static_cast<Index>(mask_.count()); }

  /// Column index for a name; throws std::out_of_range if absent.
  Index column_index(const std::string& name) const;

  /// True when `completed` has the data's shape and equals values() on
  /// every observed cell.
  bool agrees_on_observed(const Matrix& completed) const;

 private:
  Matrix values_;
  Mask mask_;
  std::vector<std::string> names_;
  std::vector<MissingPattern> patterns_;
};

/// Fills every missing cell with a uniform draw from the observed values of
/// its column.
Matrix initialize_by_observed_draws(const IncompleteData& data, RngStream& rng);

/// Default column names x1..xp, or x, y, z for p = 3.
std::vector<std::string> default_column_names(Index p);

}  // namespace mibridge
