#pragma once

#include <string>
#include <vector>

#include "ldpse/aggregator.hpp"
#include "ldpse/config.hpp"
#include "ldpse/datagen.hpp"
#include "ldpse/stats.hpp"

namespace ldpse {

// Dataset plus everything derived from the truth once per experiment.
struct PreparedData {
  Dataset dataset;
  QuantizationScheme scheme;
  std::vector<UserRows> user_rows;                // ordered by user id
  Eigen::ArrayXd true_energy;                     // per appliance watt totals
  ApplianceRanking true_ranking;                  // full length
  std::vector<Eigen::ArrayXXd> true_level_counts; // per day, appliances x levels
};

PreparedData prepare_data(const ExperimentConfig& config);

struct RepetitionResult {
  HitRate hit;
  Eigen::ArrayXd estimated_energy;
  SimilarityReport similarity;
  double max_window_spend = 0.0;
  std::int64_t publish_count = 0;
  std::int64_t approximate_count = 0;
  double release_seconds = 0.0;  // summed across workers
  std::int64_t release_count = 0;
};

// One full privacy pass over the prepared dataset: per-user streams, per-day
// aggregation and estimation, ranking and similarity analysis. Deterministic
// given (config.seed, repetition), independent of worker count.
RepetitionResult run_repetition(const PreparedData& prepared,
                                const ExperimentConfig& config, int repetition);

struct ExperimentOutput {
  std::string results_json;  // deterministic machine-readable bytes
  std::string summary_text;
};

ExperimentOutput run_experiment(const ExperimentConfig& config);

// Table-style comparison of the pipeline against per-reading noise baselines.
// Baselines perturb every appliance reading at every timestamp with a fixed
// budget; their hit rate measures how well each household's own top-k survives,
// since per-reading mechanisms release per-household data. The pipeline's hit
// rate is measured on the population ranking its aggregation protocol is
// designed for.
struct MechanismResult {
  std::string name;
  double mean_hits = 0.0;
  double mean_rate = 0.0;
  double mean_release_ms = 0.0;
};

struct BenchmarkOutput {
  std::vector<MechanismResult> mechanisms;
  std::string results_json;
  std::string summary_text;
};

BenchmarkOutput run_benchmark_suite(const ExperimentConfig& config);

// Regenerates the human-readable summary for an existing results file.
std::string summarize_results_json(const std::string& json_text);

}  // namespace ldpse
