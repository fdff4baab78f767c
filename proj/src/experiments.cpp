#include "mibridge/experiments.hpp"

#include "mibridge/jm_imputer.hpp"
#include "mibridge/parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace mibridge {

std::string to_string(Method method) { return method == Method::JM ? "JM" : "FCS"; }

SimulationDesign SimulationDesign::reference(Mechanism mechanism) {
  Vector mu(3);
  mu << 1.0, 4.0, 9.0;
  Matrix sigma(3, 3);
  sigma << 4.0, 2.0, 2.0,
           2.0, 4.0, 2.0,
           2.0, 2.0, 9.0;
  SimulationDesign d(GaussianParams(mu, sigma));
  d.column_names = {"x", "y", "z"};
  d.amputation = AmputationSpec::equal_patterns(mechanism, 0.5, 3);
  d.joint_prior.emplace(Vector::Zero(3), 1.0, 3.0, 60.0 * Matrix::Identity(3, 3));
  d.visit_sequence = {"z", "x", "y"};
  return d;
}

Index SimulationDesign::column(const std::string& name) const {
  const auto it = std::find(column_names.begin(), column_names.end(), name);
  if (it == column_names.end()) throw std::out_of_range("unknown column '" + name + "'");
  return static_cast<Index>(it - column_names.begin());
}

NigPriorSet SimulationDesign::fcs_priors() const {
  if (conditional_priors) return *conditional_priors;
  if (joint_prior) return NigPriorSet::from_joint(*joint_prior);
  throw std::invalid_argument("design has neither a joint nor conditional priors");
}

const NiwPrior& SimulationDesign::jm_prior() const {
  if (!joint_prior) throw std::invalid_argument("JM imputation needs a joint NIW prior");
  return *joint_prior;
}

IncompleteData simulate_dataset(const SimulationDesign& design, const RngStream& rng) {
  RngStream gen = rng.child(0);
  RngStream amp = rng.child(1);
  const Matrix complete = generate_complete(gen, design.n_cases, design.population);
  return ampute(amp, complete, design.amputation, design.column_names);
}

std::vector<Matrix> impute(const SimulationDesign& design, Method method,
                           const IncompleteData& data, const RngStream& rng) {
  RngStream imp = rng.child(2);
  if (method == Method::JM) {
    return jm_impute(data, design.jm_prior(), imp, design.burn_in, design.m_imputations);
  }
  const VisitSequence visit = VisitSequence::from_names(data, design.visit_sequence);
  return fcs_impute(data, design.fcs_priors(), visit, imp, design.burn_in,
                    design.m_imputations);
}

PooledEstimate coverage_replication(const SimulationDesign& design, Method method,
                                    const RngStream& rng) {
  const IncompleteData data = simulate_dataset(design, rng);
  const std::vector<Matrix> completed = impute(design, method, data, rng);
  const Index j = design.column(design.estimand);
  std::vector<ImputationEstimate> est;
  est.reserve(completed.size());
  for (const Matrix& c : completed) est.push_back(column_mean_estimate(c, j));
  return pool(est);
}

namespace {

struct TracedCoefficient {
  Index response;
  IndexList predictors;
  Index slot;  // position of the traced coefficient in the OLS fit

  double operator()(const Matrix& completed) const {
    return regression_coefficients(completed, response, predictors)(slot);
  }
};

TracedCoefficient traced_coefficient(const SimulationDesign& design) {
  TracedCoefficient t;
  t.response = design.column(design.trace_response);
  t.predictors = complement_of(static_cast<Index>(design.column_names.size()), t.response);
  const Index coef = design.column(design.trace_coefficient);
  const auto it = std::find(t.predictors.begin(), t.predictors.end(), coef);
  if (it == t.predictors.end()) {
    throw std::invalid_argument("traced coefficient must differ from the traced response");
  }
  t.slot = 1 + static_cast<Index>(it - t.predictors.begin());
  return t;
}

}  // namespace

OrderEffectReplication order_effect_replication(const SimulationDesign& design,
                                                const RngStream& rng) {
  const IncompleteData data = simulate_dataset(design, rng);
  const VisitSequence visit = VisitSequence::from_names(data, design.visit_sequence);
  if (visit.order().size() < 2) {
    throw std::invalid_argument("order effect needs at least two incomplete columns");
  }
  const TracedCoefficient coef = traced_coefficient(design);
  OrderEffectReplication rep;
  rep.diffs.reserve(design.order_effect_iters);
  double after_first = 0.0;
  FcsTraceHook hook = [&](const FcsTraceEvent& ev) {
    if (ev.iteration < design.burn_in || ev.position > 1) return;
    const double c = coef(ev.completed);
    if (ev.position == 0) {
      after_first = c;
    } else {
      rep.diffs.push_back(after_first - c);
    }
  };
  RngStream chain = rng.child(2);
  fcs_iterate(data, design.fcs_priors(), visit, chain,
              design.burn_in + design.order_effect_iters, hook);
  rep.result = batch_means_ci(rep.diffs, design.n_batches, 0.0);
  return rep;
}

OrderEffectSummary order_effect_experiment(const SimulationDesign& design,
                                           std::uint64_t seed, std::size_t n_reps,
                                           std::size_t workers) {
  const RngStream master(seed);
  auto outcomes = parallel_map<OrderEffectReplication>(
      n_reps, workers,
      [&](std::size_t r) { return order_effect_replication(design, master.child(r)); });
  OrderEffectSummary s;
  for (auto& o : outcomes) {
    s.errors.push_back(o.error);
    if (o.value) {
      ++s.n_completed;
      if (o.value->result.excludes_zero) ++s.n_excluding;
    }
    s.replications.push_back(std::move(o.value));
  }
  s.exclusion_fraction =
      s.n_completed > 0 ? static_cast<double>(s.n_excluding) / static_cast<double>(s.n_completed)
                        : 0.0;
  return s;
}

PosteriorDraws posterior_draws(const SimulationDesign& design, const RngStream& rng) {
  const IncompleteData data = simulate_dataset(design, rng);
  const TracedCoefficient coef = traced_coefficient(design);
  const std::size_t beta_slot = static_cast<std::size_t>(coef.slot - 1);
  PosteriorDraws out;
  out.jm.reserve(design.posterior_draws);
  out.fcs.reserve(design.posterior_draws);

  RngStream jm_rng = rng.child(3);
  const NiwPrior& prior = design.jm_prior();
  JmState state = jm_initialize(data, prior, jm_rng);
  for (std::size_t t = 0; t < design.burn_in + design.posterior_draws; ++t) {
    state = jm_gibbs_step(state, data, prior, jm_rng);
    if (t < design.burn_in) continue;
    const ConditionalRegression reg = to_regression(partition(state.params, coef.response));
    out.jm.push_back(reg.beta(static_cast<Index>(beta_slot)));
  }

  RngStream fcs_rng = rng.child(4);
  const VisitSequence visit = VisitSequence::from_names(data, design.visit_sequence);
  FcsTraceHook hook = [&](const FcsTraceEvent& ev) {
    if (ev.iteration < design.burn_in || ev.column != coef.response) return;
    out.fcs.push_back(ev.drawn.beta(static_cast<Index>(beta_slot)));
  };
  fcs_iterate(data, design.fcs_priors(), visit, fcs_rng,
              design.burn_in + design.posterior_draws, hook);
  if (out.fcs.size() != design.posterior_draws) {
    throw std::invalid_argument("traced response has no missing values to draw for");
  }
  return out;
}

}  // namespace mibridge
