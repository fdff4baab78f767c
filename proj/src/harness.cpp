#include "mibridge/harness.hpp"

#include "mibridge/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#ifndef MIBRIDGE_GIT_DESCRIBE
#define MIBRIDGE_GIT_DESCRIBE "unknown"
#endif

namespace mibridge {

std::string build_version() { return MIBRIDGE_GIT_DESCRIBE; }

std::string to_string(MethodChoice choice) {
  switch (choice) {
    case MethodChoice::JM: return "JM";
    case MethodChoice::FCS: return "FCS";
    case MethodChoice::Both: return "both";
  }
  return "?";
}

MethodChoice method_choice_from_string(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "jm") return MethodChoice::JM;
  if (s == "fcs") return MethodChoice::FCS;
  if (s == "both") return MethodChoice::Both;
  throw std::invalid_argument("unknown method '" + name + "' (expected JM, FCS or both)");
}

void ExperimentConfig::validate() const {
  const SimulationDesign& d = design;
  const Index p = d.population.dim();
  if (n_replications == 0 || d.n_cases < 2 || d.m_imputations < 2 || d.burn_in == 0 ||
      d.order_effect_iters == 0 || d.n_batches < 2 || d.posterior_draws == 0 || workers == 0) {
    throw std::invalid_argument(
        "config: counts must be positive (n_cases and m_imputations at least 2, n_batches at "
        "least 2)");
  }
  if (static_cast<Index>(d.column_names.size()) != p) {
    throw std::invalid_argument("config: column_names must name every population column");
  }
  if (d.joint_prior && d.joint_prior->dim() != p) {
    throw std::invalid_argument("config: prior dimension differs from the data columns");
  }
  if (d.conditional_priors) {
    for (const NigPrior& np : d.conditional_priors->all()) {
      if (np.coef_mean.size() != p) {
        throw std::invalid_argument("config: conditional prior dimension differs from the data");
      }
    }
  }
  if (!d.joint_prior && !d.conditional_priors) {
    throw std::invalid_argument("config: no prior given");
  }
  if (!d.joint_prior && method != MethodChoice::FCS) {
    throw std::invalid_argument("config: JM needs a joint prior");
  }
  d.amputation.validate(p);
  d.column(d.estimand);
  d.column(d.trace_response);
  d.column(d.trace_coefficient);
  for (const auto& name : d.visit_sequence) d.column(name);
}

PriorDocument prior_from_json(const Json& j) {
  PriorDocument doc;
  if (j.contains("format")) {
    doc.conditional.emplace(nig_priors_from_document(j, &doc.column_names));
  } else {
    doc.joint.emplace(niw_prior_from_json(j));
  }
  return doc;
}

namespace {

std::size_t count_field(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw std::invalid_argument(std::string("config: ") + key +
                                " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<std::string> names_field(const Json& j, const char* key) {
  if (!j.at(key).is_array()) {
    throw std::invalid_argument(std::string("config: ") + key + " must be a list of names");
  }
  return j.at(key).get<std::vector<std::string>>();
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  reject_unknown_fields(
      j,
      {"seed", "n_cases", "n_replications", "mechanism", "method", "m_imputations", "burn_in",
       "order_effect_iters", "n_batches", "posterior_draws", "prop_missing", "marr_slope",
       "workers", "column_names", "population", "prior", "visit_sequence", "estimand",
       "trace_response", "trace_coefficient", "output_dir"},
      "config");
  ExperimentConfig c;
  SimulationDesign& d = c.design;
  if (j.contains("population")) {
    const Json& pop = j.at("population");
    reject_unknown_fields(pop, {"mean", "covariance"}, "config population");
    d.population = GaussianParams(vector_from_json(pop.at("mean"), "population mean"),
                                  matrix_from_json(pop.at("covariance"), "population covariance"));
    d.column_names = default_column_names(d.population.dim());
    d.amputation.patterns =
        AmputationSpec::equal_patterns(d.amputation.mechanism, d.amputation.prop_missing_rows,
                                       d.population.dim())
            .patterns;
    const Index p = d.population.dim();
    d.joint_prior.emplace(Vector::Zero(p), 1.0, static_cast<double>(p),
                          60.0 * Matrix::Identity(p, p));
    d.visit_sequence = d.column_names;
  }
  if (j.contains("column_names")) d.column_names = names_field(j, "column_names");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) {
      throw std::invalid_argument("config: seed must be a non-negative integer");
    }
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("n_cases")) d.n_cases = static_cast<Index>(count_field(j, "n_cases"));
  if (j.contains("n_replications")) c.n_replications = count_field(j, "n_replications");
  if (j.contains("mechanism")) {
    d.amputation.mechanism = mechanism_from_string(j.at("mechanism").get<std::string>());
  }
  if (j.contains("prop_missing")) d.amputation.prop_missing_rows = j.at("prop_missing").get<double>();
  if (j.contains("marr_slope")) d.amputation.marr_slope = j.at("marr_slope").get<double>();
  if (j.contains("method")) c.method = method_choice_from_string(j.at("method").get<std::string>());
  if (j.contains("m_imputations")) d.m_imputations = count_field(j, "m_imputations");
  if (j.contains("burn_in")) d.burn_in = count_field(j, "burn_in");
  if (j.contains("order_effect_iters")) d.order_effect_iters = count_field(j, "order_effect_iters");
  if (j.contains("n_batches")) d.n_batches = count_field(j, "n_batches");
  if (j.contains("posterior_draws")) d.posterior_draws = count_field(j, "posterior_draws");
  if (j.contains("workers")) c.workers = count_field(j, "workers");
  if (j.contains("prior")) {
    PriorDocument prior = prior_from_json(j.at("prior"));
    d.joint_prior = prior.joint;
    d.conditional_priors = prior.conditional;
    if (!prior.column_names.empty() && prior.column_names != d.column_names) {
      throw std::invalid_argument("config: prior set columns differ from column_names");
    }
  }
  if (j.contains("visit_sequence")) d.visit_sequence = names_field(j, "visit_sequence");
  if (j.contains("estimand")) d.estimand = j.at("estimand").get<std::string>();
  if (j.contains("trace_response")) d.trace_response = j.at("trace_response").get<std::string>();
  if (j.contains("trace_coefficient")) {
    d.trace_coefficient = j.at("trace_coefficient").get<std::string>();
  }
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  c.validate();
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  const SimulationDesign& d = c.design;
  Json j;
  j["seed"] = c.seed;
  j["n_cases"] = d.n_cases;
  j["n_replications"] = c.n_replications;
  j["mechanism"] = to_string(d.amputation.mechanism);
  j["method"] = to_string(c.method);
  j["m_imputations"] = d.m_imputations;
  j["burn_in"] = d.burn_in;
  j["order_effect_iters"] = d.order_effect_iters;
  j["n_batches"] = d.n_batches;
  j["posterior_draws"] = d.posterior_draws;
  j["prop_missing"] = d.amputation.prop_missing_rows;
  j["marr_slope"] = d.amputation.marr_slope;
  j["workers"] = c.workers;
  j["column_names"] = d.column_names;
  j["population"] = {{"mean", to_json(d.population.mu())},
                     {"covariance", to_json(d.population.sigma())}};
  if (d.conditional_priors) {
    Json doc;
    doc["format"] = "nig-prior-set";
    doc["version"] = 1;
    doc["columns"] = d.column_names;
    Json priors = Json::array();
    for (const NigPrior& np : d.conditional_priors->all()) {
      priors.push_back(to_json(np, d.column_names));
    }
    doc["priors"] = std::move(priors);
    j["prior"] = std::move(doc);
  } else if (d.joint_prior) {
    j["prior"] = to_json(*d.joint_prior);
  }
  j["visit_sequence"] = d.visit_sequence;
  j["estimand"] = d.estimand;
  j["trace_response"] = d.trace_response;
  j["trace_coefficient"] = d.trace_coefficient;
  j["output_dir"] = c.output_dir.string();
  return j;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::size_t ReplicationLog::n_failed() const {
  return static_cast<std::size_t>(
      std::count_if(errors.begin(), errors.end(), [](const std::string& e) { return !e.empty(); }));
}

bool ReplicationLog::run_failed() const {
  return static_cast<double>(n_failed()) > 0.01 * static_cast<double>(errors.size());
}

bool CoverageStudyResult::failed() const {
  return std::any_of(methods.begin(), methods.end(),
                     [](const MethodCoverage& m) { return m.log.run_failed(); });
}

namespace {

using Clock = std::chrono::steady_clock;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void log_failures(const std::string& label, const ReplicationLog& log) {
  for (std::size_t r = 0; r < log.errors.size(); ++r) {
    if (!log.errors[r].empty()) {
      std::cerr << label << ": replication " << r << " excluded: " << log.errors[r] << '\n';
    }
  }
}

Json failures_json(const ReplicationLog& log) {
  Json list = Json::array();
  for (std::size_t r = 0; r < log.errors.size(); ++r) {
    if (!log.errors[r].empty()) list.push_back({{"replication", r}, {"error", log.errors[r]}});
  }
  return {{"count", log.n_failed()},
          {"total", log.errors.size()},
          {"run_failed", log.run_failed()},
          {"excluded", std::move(list)}};
}

/// Writes config.json before the run and manifest.json after it.
class RunDirectory {
 public:
  RunDirectory(const ExperimentConfig& config, std::string command)
      : config_(config), command_(std::move(command)), started_(utc_timestamp()),
        t0_(Clock::now()) {
    if (!enabled()) return;
    std::filesystem::create_directories(config_.output_dir);
    write("config.json", config_to_json(config_).dump(2) + "\n");
  }

  bool enabled() const { return !config_.output_dir.empty(); }

  void write(const std::string& name, const std::string& contents) const {
    if (enabled()) write_file(config_.output_dir / name, contents);
  }

  void finish(Json failures) const {
    if (!enabled()) return;
    Json m;
    m["command"] = command_;
    m["seed"] = config_.seed;
    m["version"] = build_version();
    m["started_utc"] = started_;
    m["wall_clock_seconds"] = std::chrono::duration<double>(Clock::now() - t0_).count();
    m["failures"] = std::move(failures);
    write("manifest.json", m.dump(2) + "\n");
  }

 private:
  const ExperimentConfig& config_;
  std::string command_;
  std::string started_;
  Clock::time_point t0_;
};

std::vector<Method> methods_of(MethodChoice choice) {
  switch (choice) {
    case MethodChoice::JM: return {Method::JM};
    case MethodChoice::FCS: return {Method::FCS};
    case MethodChoice::Both: return {Method::JM, Method::FCS};
  }
  return {};
}

Json summary_json(const EvalSummary& s) {
  return {{"bias", s.bias}, {"coverage", s.coverage}, {"ci_width", s.ci_width},
          {"n_reps", s.n_reps}};
}

}  // namespace

CoverageStudyResult run_coverage_study(const ExperimentConfig& config) {
  config.validate();
  const RunDirectory dir(config, "coverage-study");
  const SimulationDesign& design = config.design;
  const RngStream master(config.seed);

  CoverageStudyResult result;
  result.truth = design.population.mu()(design.column(design.estimand));
  std::ostringstream csv;
  csv << "replication,method,qbar,ubar,b,t_var,df,ci_low,ci_high,covered,error\n";
  Json summary;
  summary["estimand"] = design.estimand;
  summary["truth"] = result.truth;
  Json failures;

  for (Method method : methods_of(config.method)) {
    auto outcomes = parallel_map<PooledEstimate>(
        config.n_replications, config.workers,
        [&](std::size_t r) { return coverage_replication(design, method, master.child(r)); });
    MethodCoverage mc{method, {}, {}, {}};
    std::vector<PooledEstimate> ok;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
      auto& o = outcomes[r];
      mc.log.errors.push_back(o.error);
      csv << r << ',' << to_string(method) << ',';
      if (o.value) {
        const PooledEstimate& e = *o.value;
        const bool covered = e.ci_low <= result.truth && result.truth <= e.ci_high;
        csv << format_double(e.qbar) << ',' << format_double(e.ubar) << ','
            << format_double(e.b) << ',' << format_double(e.t_var) << ','
            << format_double(e.df) << ',' << format_double(e.ci_low) << ','
            << format_double(e.ci_high) << ',' << (covered ? 1 : 0) << ",\n";
        ok.push_back(e);
      } else {
        std::string msg = o.error;
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        csv << ",,,,,,,," << msg << '\n';
      }
      mc.replications.push_back(std::move(o.value));
    }
    if (!ok.empty()) mc.summary = evaluate(ok, result.truth);
    log_failures("coverage-study " + to_string(method), mc.log);
    summary[to_string(method)] = summary_json(mc.summary);
    failures[to_string(method)] = failures_json(mc.log);
    result.methods.push_back(std::move(mc));
  }

  dir.write("replications.csv", csv.str());
  dir.write("summary.json", summary.dump(2) + "\n");
  dir.finish(std::move(failures));
  return result;
}

OrderEffectSummary run_order_effect(const ExperimentConfig& config) {
  config.validate();
  const RunDirectory dir(config, "order-effect");
  OrderEffectSummary s =
      order_effect_experiment(config.design, config.seed, config.n_replications, config.workers);
  const ReplicationLog log{s.errors};
  log_failures("order-effect", log);

  if (dir.enabled()) {
    std::ostringstream reps;
    std::ostringstream diffs;
    reps << "replication,mean_diff,se,ci_low,ci_high,excludes_zero,error\n";
    diffs << "replication,iteration,diff\n";
    for (std::size_t r = 0; r < s.replications.size(); ++r) {
      const auto& rep = s.replications[r];
      reps << r << ',';
      if (rep) {
        const OrderEffectResult& res = rep->result;
        reps << format_double(res.mean_diff) << ',' << format_double(res.se) << ','
             << format_double(res.ci_low) << ',' << format_double(res.ci_high) << ','
             << (res.excludes_zero ? 1 : 0) << ",\n";
        for (std::size_t t = 0; t < rep->diffs.size(); ++t) {
          diffs << r << ',' << t << ',' << format_double(rep->diffs[t]) << '\n';
        }
      } else {
        std::string msg = s.errors[r];
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        reps << ",,,,," << msg << '\n';
      }
    }
    dir.write("replications.csv", reps.str());
    dir.write("diffs.csv", diffs.str());
    Json summary;
    summary["trace"] = {{"response", config.design.trace_response},
                        {"coefficient", config.design.trace_coefficient}};
    summary["visit_sequence"] = config.design.visit_sequence;
    summary["n_completed"] = s.n_completed;
    summary["n_excluding_zero"] = s.n_excluding;
    summary["exclusion_fraction"] = s.exclusion_fraction;
    dir.write("summary.json", summary.dump(2) + "\n");
  }
  dir.finish(failures_json(log));
  return s;
}

PosteriorCompareResult run_posterior_compare(const ExperimentConfig& config) {
  config.validate();
  if (!config.design.joint_prior) {
    throw std::invalid_argument("posterior-compare needs a joint prior");
  }
  const RunDirectory dir(config, "posterior-compare");
  PosteriorCompareResult out;
  out.draws = posterior_draws(config.design, RngStream(config.seed));
  out.comparison = posterior_compare(out.draws.jm, out.draws.fcs);

  if (dir.enabled()) {
    std::ostringstream draws;
    draws << "draw,jm,fcs\n";
    for (std::size_t t = 0; t < out.draws.jm.size(); ++t) {
      draws << t << ',' << format_double(out.draws.jm[t]) << ','
            << format_double(out.draws.fcs[t]) << '\n';
    }
    std::ostringstream qq;
    qq << "percentile,jm,fcs\n";
    for (std::size_t k = 0; k < out.comparison.qq_pairs.size(); ++k) {
      qq << k + 1 << ',' << format_double(out.comparison.qq_pairs[k].first) << ','
         << format_double(out.comparison.qq_pairs[k].second) << '\n';
    }
    Json ks;
    ks["statistic"] = out.comparison.ks;
    ks["n_jm"] = out.draws.jm.size();
    ks["n_fcs"] = out.draws.fcs.size();
    ks["trace"] = {{"response", config.design.trace_response},
                   {"coefficient", config.design.trace_coefficient}};
    dir.write("draws.csv", draws.str());
    dir.write("qq.csv", qq.str());
    dir.write("ks.json", ks.dump(2) + "\n");
  }
  dir.finish(failures_json(ReplicationLog{{""}}));
  return out;
}

Json transform_prior(const std::string& niw_json_text, const std::optional<std::string>& column,
                     std::vector<std::string> column_names) {
  const Json input = Json::parse(niw_json_text);
  const NiwPrior prior = niw_prior_from_json(input);
  if (column_names.empty()) column_names = default_column_names(prior.dim());
  if (static_cast<Index>(column_names.size()) != prior.dim()) {
    throw std::invalid_argument("transform-prior: column names do not match the prior");
  }
  std::optional<Index> only;
  if (column) {
    const auto it = std::find(column_names.begin(), column_names.end(), *column);
    if (it != column_names.end()) {
      only = static_cast<Index>(it - column_names.begin());
    } else {
      std::size_t used = 0;
      long long k = -1;
      try {
        k = std::stoll(*column, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != column->size() || k < 0 || k >= prior.dim()) {
        throw std::invalid_argument("transform-prior: unknown column '" + *column + "'");
      }
      only = static_cast<Index>(k);
    }
  }
  return nig_prior_set_document(prior, column_names, only, sha256_hex(niw_json_text));
}

}  // namespace mibridge
