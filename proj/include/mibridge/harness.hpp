#pragma once

#include "mibridge/experiments.hpp"
#include "mibridge/serialization.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mibridge {

enum class MethodChoice { JM, FCS, Both };

std::string to_string(MethodChoice choice);
MethodChoice method_choice_from_string(const std::string& name);

/// A run: the simulation design plus seed, replication count, method and
/// output location. Defaults reproduce the reference design.
struct ExperimentConfig {
  SimulationDesign design = SimulationDesign::reference();
  std::uint64_t seed = 2021;
  std::size_t n_replications = 500;
  MethodChoice method = MethodChoice::FCS;
  std::size_t workers = 1;
  /// Empty: nothing is written.
  std::filesystem::path output_dir;

  /// Throws std::invalid_argument on zero counts or mismatched dimensions.
  void validate() const;
};

/// Parses a configuration object. Unknown fields are rejected; absent ones
/// keep the reference defaults. `prior` is either a joint prior document
/// or a conditional prior set.
ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& config);
ExperimentConfig read_config(const std::filesystem::path& path);

/// Reads a prior document: a joint NIW prior ({"type": "niw", ...}) or a
/// conditional prior set ({"format": "nig-prior-set", ...}).
struct PriorDocument {
  std::optional<NiwPrior> joint;
  std::optional<NigPriorSet> conditional;
  std::vector<std::string> column_names;  // empty for a joint prior
};
PriorDocument prior_from_json(const Json& j);

/// Replications whose error string is nonempty were excluded.
struct ReplicationLog {
  std::vector<std::string> errors;
  std::size_t n_failed() const;
  /// True when more than 1% of replications aborted.
  bool run_failed() const;
};

struct MethodCoverage {
  Method method;
  std::vector<std::optional<PooledEstimate>> replications;
  ReplicationLog log;
  EvalSummary summary;
};

struct CoverageStudyResult {
  double truth = 0.0;
  std::vector<MethodCoverage> methods;
  bool failed() const;
};

/// Replication r simulates from RngStream(seed).child(r); with method
/// Both, JM and FCS impute the same data set. Writes config.json,
/// replications.csv, summary.json and manifest.json.
CoverageStudyResult run_coverage_study(const ExperimentConfig& config);

/// FCS order-effect study. Writes config.json, replications.csv,
/// diffs.csv, summary.json and manifest.json.
OrderEffectSummary run_order_effect(const ExperimentConfig& config);

struct PosteriorCompareResult {
  PosteriorDraws draws;
  PosteriorComparison comparison;
};

/// JM and FCS on one amputed data set drawn from RngStream(seed). Writes
/// config.json, draws.csv, qq.csv, ks.json and manifest.json.
PosteriorCompareResult run_posterior_compare(const ExperimentConfig& config);

/// The conditional-prior document for a joint prior document given as
/// text. `column` selects one column by name or index; `column_names`
/// defaults to default_column_names(p).
Json transform_prior(const std::string& niw_json_text, const std::optional<std::string>& column,
                     std::vector<std::string> column_names = {});

/// Version string baked in at build time.
std::string build_version();

}  // namespace mibridge
