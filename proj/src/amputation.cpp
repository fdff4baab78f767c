#include "mibridge/amputation.hpp"

#include "mibridge/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mibridge {

std::string to_string(Mechanism mech) {
  return mech == Mechanism::MCAR ? "MCAR" : "MARr";
}

Mechanism mechanism_from_string(const std::string& name) {
  if (name == "MCAR" || name == "mcar") return Mechanism::MCAR;
  if (name == "MARr" || name == "marr" || name == "MARR") return Mechanism::MARr;
  throw std::invalid_argument("unknown missingness mechanism '" + name + "'");
}

AmputationSpec AmputationSpec::equal_patterns(Mechanism mech, double prop, Index p) {
  AmputationSpec spec;
  spec.mechanism = mech;
  spec.prop_missing_rows = prop;
  for (Index j = 0; j < p; ++j) {
    spec.patterns.push_back({j, 1.0 / static_cast<double>(p)});
  }
  return spec;
}

void AmputationSpec::validate(Index p) const {
  if (!(prop_missing_rows > 0.0 && prop_missing_rows < 1.0)) {
    throw std::invalid_argument("amputation: proportion must lie in (0, 1)");
  }
  if (patterns.empty()) throw std::invalid_argument("amputation: no patterns");
  double total = 0.0;
  for (std::size_t a = 0; a < patterns.size(); ++a) {
    if (patterns[a].column < 0 || patterns[a].column >= p) {
      throw std::invalid_argument("amputation: pattern references column " +
                                  std::to_string(patterns[a].column) +
                                  " of a " + std::to_string(p) + "-column dataset");
    }
    if (!(patterns[a].weight > 0.0)) {
      throw std::invalid_argument("amputation: pattern weights must be positive");
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (patterns[a].column == patterns[b].column) {
        throw std::invalid_argument("amputation: duplicate pattern column");
      }
    }
    total += patterns[a].weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("amputation: pattern weights must sum to 1");
  }
  if (p < 2) throw std::invalid_argument("amputation: need at least two columns");
}

Matrix generate_complete(RngStream& rng, Index n, const GaussianParams& params) {
  if (n < 1) throw std::invalid_argument("generate_complete: n must be positive");
  Matrix out(n, params.dim());
  const Matrix lower = params.chol().matrixL();
  for (Index i = 0; i < n; ++i) {
    out.row(i) = draw_mvn(rng, params.mu(), lower).transpose();
  }
  return out;
}

namespace {

std::size_t pick_pattern(RngStream& rng, const std::vector<AmputationPattern>& patterns) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < patterns.size(); ++k) {
    acc += patterns[k].weight;
    if (u < acc) return k;
  }
  return patterns.size() - 1;
}

// Finds c with mean(min(1, c w)) = target by bisection on c.
std::vector<double> calibrated_probabilities(const std::vector<double>& w, double target) {
  auto mean_prob = [&](double c) {
    double s = 0.0;
    for (double x : w) s += std::min(1.0, c * x);
    return s / static_cast<double>(w.size());
  };
  const double w_mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
  double lo = 0.0;
  double hi = target / w_mean;
  while (mean_prob(hi) < target) hi *= 2.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (mean_prob(mid) < target ? lo : hi) = mid;
  }
  std::vector<double> prob(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) prob[i] = std::min(1.0, hi * w[i]);
  return prob;
}

}  // namespace

IncompleteData ampute(RngStream& rng, const Matrix& data, const AmputationSpec& spec,
                      std::vector<std::string> column_names) {
  const Index n = data.rows();
  const Index p = data.cols();
  spec.validate(p);
  if (column_names.empty()) column_names = default_column_names(p);

  std::vector<std::size_t> assigned(static_cast<std::size_t>(n));
  for (auto& a : assigned) a = pick_pattern(rng, spec.patterns);
  std::vector<double> uniforms(static_cast<std::size_t>(n));
  for (auto& u : uniforms) u = rng.uniform();

  std::vector<double> prob(static_cast<std::size_t>(n), spec.prop_missing_rows);
  if (spec.mechanism == Mechanism::MARr && n > 1) {
    const Vector mean = data.colwise().mean().transpose();
    const Vector sd =
        ((data.rowwise() - mean.transpose()).colwise().squaredNorm().transpose() /
         static_cast<double>(n - 1))
            .cwiseSqrt();
    for (std::size_t k = 0; k < spec.patterns.size(); ++k) {
      const Index j = spec.patterns[k].column;
      std::vector<std::size_t> rows;
      std::vector<double> weights;
      for (Index i = 0; i < n; ++i) {
        if (assigned[static_cast<std::size_t>(i)] != k) continue;
        double zbar = 0.0;
        for (Index c = 0; c < p; ++c) {
          if (c == j) continue;
          zbar += sd(c) > 0.0 ? (data(i, c) - mean(c)) / sd(c) : 0.0;
        }
        zbar /= static_cast<double>(p - 1);
        rows.push_back(static_cast<std::size_t>(i));
        weights.push_back(1.0 / (1.0 + std::exp(-spec.marr_slope * zbar)));
      }
      if (rows.empty()) continue;
      const std::vector<double> pr = calibrated_probabilities(weights, spec.prop_missing_rows);
      for (std::size_t r = 0; r < rows.size(); ++r) prob[rows[r]] = pr[r];
    }
  }

  Mask mask = Mask::Constant(n, p, false);
  for (Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (uniforms[ui] < prob[ui]) {
      mask(i, spec.patterns[assigned[ui]].column) = true;
    }
  }
  return IncompleteData(data, std::move(mask), std::move(column_names));
}

}  // namespace mibridge
