#pragma once

#include "mibridge/amputation.hpp"
#include "mibridge/analysis.hpp"
#include "mibridge/data.hpp"
#include "mibridge/fcs_imputer.hpp"
#include "mibridge/gaussian.hpp"
#include "mibridge/prior_bridge.hpp"
#include "mibridge/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mibridge {

enum class Method { JM, FCS };

std::string to_string(Method method);

/// Everything a replication needs: population, missingness, priors and
/// chain lengths.
struct SimulationDesign {
  explicit SimulationDesign(GaussianParams pop) : population(std::move(pop)) {}

  GaussianParams population;
  std::vector<std::string> column_names;
  Index n_cases = 200;
  AmputationSpec amputation;
  /// Joint prior; required for JM, and the source of the FCS priors unless
  /// conditional_priors is set.
  std::optional<NiwPrior> joint_prior;
  std::optional<NigPriorSet> conditional_priors;
  std::vector<std::string> visit_sequence;
  std::size_t burn_in = 10;
  std::size_t m_imputations = 5;
  std::size_t order_effect_iters = 1000;
  std::size_t n_batches = 20;
  std::size_t posterior_draws = 2000;
  /// Column whose mean is the coverage-study estimand.
  std::string estimand = "y";
  /// The order-effect and posterior comparisons track the coefficient of
  /// `trace_coefficient` in the regression of `trace_response` on the
  /// other columns.
  std::string trace_response = "y";
  std::string trace_coefficient = "x";

  /// Trivariate normal N((1, 4, 9), [[4, 2, 2], [2, 4, 2], [2, 2, 9]]),
  /// n = 200, half the rows missing one of x, y, z with equal shares, prior
  /// mu0 = 0, tau = 1, m = 3, Lambda = 60 I, visit order z, x, y.
  static SimulationDesign reference(Mechanism mechanism = Mechanism::MCAR);

  Index column(const std::string& name) const;
  NigPriorSet fcs_priors() const;
  const NiwPrior& jm_prior() const;
};

/// Complete data from rng.child(0), amputed with rng.child(1).
IncompleteData simulate_dataset(const SimulationDesign& design, const RngStream& rng);

/// m completed datasets; imputation draws come from rng.child(2).
std::vector<Matrix> impute(const SimulationDesign& design, Method method,
                           const IncompleteData& data, const RngStream& rng);

/// One coverage-study replication: simulate, impute, pool the estimand.
PooledEstimate coverage_replication(const SimulationDesign& design, Method method,
                                    const RngStream& rng);

struct OrderEffectReplication {
  std::vector<double> diffs;  // coefficient after 1st visit minus after 2nd
  OrderEffectResult result;
};

/// Runs burn_in + order_effect_iters FCS sweeps. In each kept sweep the
/// traced OLS coefficient is computed on the completed data right after
/// the first and right after the second visited column is updated; the
/// difference trace goes to batch_means_ci with null 0.
OrderEffectReplication order_effect_replication(const SimulationDesign& design,
                                                const RngStream& rng);

struct OrderEffectSummary {
  std::vector<std::optional<OrderEffectReplication>> replications;
  std::vector<std::string> errors;  // per replication, empty on success
  std::size_t n_excluding = 0;
  std::size_t n_completed = 0;
  double exclusion_fraction = 0.0;  // over completed replications
};

/// Replication r uses RngStream(seed).child(r).
OrderEffectSummary order_effect_experiment(const SimulationDesign& design,
                                           std::uint64_t seed, std::size_t n_reps,
                                           std::size_t workers = 1);

struct PosteriorDraws {
  std::vector<double> jm;
  std::vector<double> fcs;
};

/// Both samplers run on the same amputed dataset (simulate_dataset(rng));
/// after burn_in steps each records posterior_draws values of the traced
/// coefficient: JM from the regression implied by each theta draw, FCS
/// from each drawn regression of the traced response.
PosteriorDraws posterior_draws(const SimulationDesign& design, const RngStream& rng);

}  // namespace mibridge
