#pragma once

#include "mibridge/data.hpp"
#include "mibridge/gaussian.hpp"
#include "mibridge/rng.hpp"

#include <string>
#include <vector>

namespace mibridge {

enum class Mechanism { MCAR, MARr };

std::string to_string(Mechanism mech);
Mechanism mechanism_from_string(const std::string& name);

/// One single-cell missingness pattern and its share of incomplete rows.
struct AmputationPattern {
  Index column = 0;
  double weight = 0.0;
};

struct AmputationSpec {
  Mechanism mechanism = Mechanism::MCAR;
  double prop_missing_rows = 0.5;
  std::vector<AmputationPattern> patterns;
  /// Slope of the logistic right-tail weight under MARr.
  double marr_slope = 1.0;

  /// Equal-weight single-cell patterns over every column.
  static AmputationSpec equal_patterns(Mechanism mech, double prop, Index p);

  void validate(Index p) const;
};

/// n iid rows from N(mu, Sigma).
Matrix generate_complete(RngStream& rng, Index n, const GaussianParams& params);

/// Every row is assigned one pattern by weight. Under MCAR it loses that
/// pattern's cell with probability prop_missing_rows. Under MARr the
/// probability is min(1, c * logistic(slope * zbar)) with zbar the mean of
/// the row's other standardized values and c solved per pattern so that
/// the expected fraction removed is still prop_missing_rows.
IncompleteData ampute(RngStream& rng, const Matrix& data, const AmputationSpec& spec,
                      std::vector<std::string> column_names = {});

}  // namespace mibridge
