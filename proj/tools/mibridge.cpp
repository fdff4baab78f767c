#include "mibridge/harness.hpp"
#include "mibridge/jm_imputer.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace mibridge;

namespace {

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> workers;
  std::optional<std::string> mechanism;
  std::optional<std::string> method;
  std::optional<std::string> out;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--config", o.config, "JSON configuration file");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--reps", o.reps, "number of replications");
  cmd->add_option("--workers", o.workers, "worker threads");
  cmd->add_option("--mechanism", o.mechanism, "MCAR or MARr");
  cmd->add_option("--method", o.method, "jm, fcs or both");
  cmd->add_option("--out", o.out, "output directory");
}

ExperimentConfig load(const RunOptions& o, const std::string& command) {
  ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : read_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.reps) c.n_replications = *o.reps;
  if (o.workers) c.workers = *o.workers;
  if (o.mechanism) c.design.amputation.mechanism = mechanism_from_string(*o.mechanism);
  if (o.method) c.method = method_choice_from_string(*o.method);
  if (o.out) c.output_dir = *o.out;
  if (c.output_dir.empty()) c.output_dir = std::filesystem::path("runs") / command;
  c.validate();
  return c;
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian multiple imputation under joint and conditional normal models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", build_version());

  // simulate
  RunOptions sim_opts;
  std::string sim_csv = "incomplete.csv";
  std::string sim_complete;
  auto* sim = app.add_subcommand("simulate", "generate one data set and ampute it");
  sim->add_option("--config", sim_opts.config, "JSON configuration file");
  sim->add_option("--seed", sim_opts.seed, "seed");
  sim->add_option("--mechanism", sim_opts.mechanism, "MCAR or MARr");
  sim->add_option("--out", sim_csv, "CSV for the amputed data");
  sim->add_option("--complete-out", sim_complete, "optional CSV for the complete data");

  // impute
  std::string imp_input;
  std::string imp_method = "fcs";
  std::string imp_prior;
  std::uint64_t imp_seed = 2021;
  std::size_t imp_burn = 10;
  std::size_t imp_m = 5;
  std::string imp_visit;
  std::string imp_prefix = "imputed";
  auto* imp = app.add_subcommand("impute", "impute a CSV file m times");
  imp->add_option("--input", imp_input, "CSV with empty fields for missing cells")->required();
  imp->add_option("--method", imp_method, "jm or fcs");
  imp->add_option("--prior", imp_prior, "prior JSON (joint or conditional set)");
  imp->add_option("--seed", imp_seed, "seed");
  imp->add_option("--burn-in", imp_burn, "sweeps before each imputation");
  imp->add_option("--m", imp_m, "number of imputations");
  imp->add_option("--visit", imp_visit, "comma-separated FCS visit sequence");
  imp->add_option("--out-prefix", imp_prefix, "writes <prefix>_1.csv ... <prefix>_m.csv");

  RunOptions cov_opts, oe_opts, pc_opts;
  auto* cov = app.add_subcommand("coverage-study", "bias, coverage and CI width over replications");
  add_run_options(cov, cov_opts);
  auto* oe = app.add_subcommand("order-effect", "FCS visit-order diagnostic");
  add_run_options(oe, oe_opts);
  auto* pc = app.add_subcommand("posterior-compare", "JM versus FCS posterior draws");
  add_run_options(pc, pc_opts);

  std::string tp_input;
  std::string tp_column;
  std::string tp_names;
  std::string tp_out;
  auto* tp = app.add_subcommand("transform-prior", "joint prior to conditional priors");
  tp->add_option("--input", tp_input, "joint prior JSON")->required();
  tp->add_option("--column", tp_column, "one column (name or index); default all");
  tp->add_option("--columns", tp_names, "comma-separated column names");
  tp->add_option("--out", tp_out, "output file; default stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      ExperimentConfig c = sim_opts.config.empty() ? ExperimentConfig{} : read_config(sim_opts.config);
      if (sim_opts.seed) c.seed = *sim_opts.seed;
      if (sim_opts.mechanism) c.design.amputation.mechanism = mechanism_from_string(*sim_opts.mechanism);
      const RngStream rng(c.seed);
      const IncompleteData data = simulate_dataset(c.design, rng);
      write_csv(sim_csv, data.values(), data.column_names(), &data.mask());
      if (!sim_complete.empty()) {
        RngStream gen = rng.child(0);
        write_csv(sim_complete, generate_complete(gen, c.design.n_cases, c.design.population),
                  c.design.column_names);
      }
      return 0;
    }
    if (*imp) {
      const IncompleteData data = read_csv(imp_input);
      const Index p = data.cols();
      PriorDocument prior;
      if (imp_prior.empty()) {
        prior.joint.emplace(Vector::Zero(p), 1.0, static_cast<double>(p),
                            60.0 * Matrix::Identity(p, p));
      } else {
        prior = prior_from_json(Json::parse(read_file(imp_prior)));
      }
      const RngStream rng(imp_seed);
      std::vector<Matrix> completed;
      const MethodChoice method = method_choice_from_string(imp_method);
      if (method == MethodChoice::JM) {
        if (!prior.joint) throw std::invalid_argument("JM imputation needs a joint prior");
        RngStream chain = rng;
        completed = jm_impute(data, *prior.joint, chain, imp_burn, imp_m);
      } else if (method == MethodChoice::FCS) {
        const NigPriorSet priors =
            prior.conditional ? *prior.conditional : NigPriorSet::from_joint(*prior.joint);
        const VisitSequence visit = imp_visit.empty()
                                        ? VisitSequence::ascending(data)
                                        : VisitSequence::from_names(data, split_names(imp_visit));
        completed = fcs_impute(data, priors, visit, rng, imp_burn, imp_m);
      } else {
        throw std::invalid_argument("impute: --method must be jm or fcs");
      }
      for (std::size_t k = 0; k < completed.size(); ++k) {
        write_csv(imp_prefix + "_" + std::to_string(k + 1) + ".csv", completed[k],
                  data.column_names());
      }
      return 0;
    }
    if (*cov) {
      const CoverageStudyResult r = run_coverage_study(load(cov_opts, "coverage-study"));
      for (const auto& m : r.methods) {
        std::cout << to_string(m.method) << ": bias " << m.summary.bias << ", coverage "
                  << m.summary.coverage << ", CI width " << m.summary.ci_width << " ("
                  << m.summary.n_reps << " replications)\n";
      }
      return r.failed() ? 2 : 0;
    }
    if (*oe) {
      const OrderEffectSummary s = run_order_effect(load(oe_opts, "order-effect"));
      std::cout << s.n_excluding << " of " << s.n_completed
                << " intervals exclude zero (fraction " << s.exclusion_fraction << ")\n";
      return ReplicationLog{s.errors}.run_failed() ? 2 : 0;
    }
    if (*pc) {
      ExperimentConfig c = load(pc_opts, "posterior-compare");
      const PosteriorCompareResult r = run_posterior_compare(c);
      std::cout << "KS statistic " << r.comparison.ks << " over " << r.draws.jm.size()
                << " draws per sampler\n";
      return 0;
    }
    if (*tp) {
      const std::optional<std::string> column =
          tp_column.empty() ? std::nullopt : std::optional<std::string>(tp_column);
      const Json doc = transform_prior(read_file(tp_input), column, split_names(tp_names));
      if (tp_out.empty()) {
        std::cout << doc.dump(2) << '\n';
      } else {
        write_file(tp_out, doc.dump(2) + "\n");
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
