#include "mibridge/data.hpp"

#include "mibridge/rng.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace mibridge {

IncompleteData::IncompleteData(Matrix values, Mask mask,
                               std::vector<std::string> column_names)
    : values_(std::move(values)), mask_(std::move(mask)), names_(std::move(column_names)) {
  const Index n = values_.rows();
  const Index p = values_.cols();
  if (mask_.rows() != n || mask_.cols() != p) {
    throw std::invalid_argument("IncompleteData: mask and values dimensions differ");
  }
  if (static_cast<Index>(names_.size()) != p) {
    throw std::invalid_argument("IncompleteData: column name count differs from columns");
  }
  std::map<std::vector<bool>, std::size_t> by_pattern;
  for (Index i = 0; i < n; ++i) {
    std::vector<bool> key(static_cast<std::size_t>(p));
    Index n_missing = 0;
    for (Index j = 0; j < p; ++j) {
      if (mask_(i, j)) {
        key[static_cast<std::size_t>(j)] = true;
        ++n_missing;
        values_(i, j) = std::numeric_limits<double>::quiet_NaN();
      } else if (!std::isfinite(values_(i, j))) {
        throw std::invalid_argument("IncompleteData: non-finite observed value in row " +
                                    std::to_string(i));
      }
    }
    if (n_missing == p) {
      throw std::invalid_argument("IncompleteData: row " + std::to_string(i) +
                                  " is fully missing");
    }
    if (n_missing == 0) continue;
    auto [it, inserted] = by_pattern.try_emplace(key, patterns_.size());
    if (inserted) {
      MissingPattern pat;
      for (Index j = 0; j < p; ++j) {
        (key[static_cast<std::size_t>(j)] ? pat.missing : pat.observed).push_back(j);
      }
      patterns_.push_back(std::move(pat));
    }
    patterns_[it->second].rows.push_back(i);
  }
}

IncompleteData IncompleteData::complete(Matrix values,
                                        std::vector<std::string> column_names) {
  Mask mask = Mask::Constant(values.rows(), values.cols(), false);
  return IncompleteData(std::move(values), std::move(mask), std::move(column_names));
}

IndexList IncompleteData::incomplete_columns() const {
  IndexList out;
  for (Index j = 0; j < cols(); ++j) {
    if (mask_.col(j).any()) out.push_back(j);
  }
  return out;
}

IndexList IncompleteData::observed_rows(Index j) const {
  IndexList out;
  for (Index i = 0; i < rows(); ++i) {
    if (!mask_(i, j)) out.push_back(i);
  }
  return out;
}

IndexList IncompleteData::missing_rows(Index j) const {
  IndexList out;
  for (Index i = 0; i < rows(); ++i) {
    if (mask_(i, j)) out.push_back(i);
  }
  return out;
}

Index IncompleteData::column_index(const std::string& name) const {
  for (std::size_t k = 0; k < names_.size(); ++k) {
    if (names_[k] == name) return static_cast<Index>(k);
  }
  throw std::out_of_range("unknown column '" + name + "'");
}

bool IncompleteData::agrees_on_observed(const Matrix& completed) const {
  if (completed.rows() != rows() || completed.cols() != cols()) return false;
  for (Index j = 0; j < cols(); ++j) {
    for (Index i = 0; i < rows(); ++i) {
      if (!mask_(i, j) && completed(i, j) != values_(i, j)) return false;
    }
  }
  return true;
}

Matrix initialize_by_observed_draws(const IncompleteData& data, RngStream& rng) {
  Matrix out = data.values();
  for (Index j = 0; j < data.cols(); ++j) {
    const IndexList miss = data.missing_rows(j);
    if (miss.empty()) continue;
    const IndexList obs = data.observed_rows(j);
    if (obs.empty()) {
      throw std::invalid_argument("column '" + data.column_names()[static_cast<std::size_t>(j)] +
                                  "' has no observed values");
    }
    for (Index i : miss) {
      out(i, j) = data.values()(obs[rng.index(obs.size())], j);
    }
  }
  return out;
}

std::vector<std::string> default_column_names(Index p) {
  if (p == 3) return {"x", "y", "z"};
  std::vector<std::string> names;
  for (Index j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
  return names;
}

}  // namespace mibridge
