#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ldpse/aggregator.hpp"
#include "ldpse/scheduler.hpp"

namespace ldpse {

enum class LspRule { BlockStart, RandomOffset };

SchedulerKind parse_scheduler(const std::string& name);
std::string scheduler_name(SchedulerKind kind);
EstimatorMode parse_estimator(const std::string& name);
std::string estimator_name(EstimatorMode mode);

struct ExperimentConfig {
  double epsilon = 10.0;
  int window = 3;
  int levels = 10;
  int appliances = 15;
  std::int64_t users = 1000;
  std::int64_t days = 30;
  SchedulerKind method = SchedulerKind::LBA;
  EstimatorMode estimator = EstimatorMode::Standard;
  DissimilarityForm dissimilarity_form = DissimilarityForm::Squared;
  LspRule lsp_rule = LspRule::BlockStart;
  std::string data_source = "household";  // household | uniform | normal |
                                          // skew_left | skew_right | csv
  std::string input_csv;
  std::int64_t archetypes = 39;
  std::uint64_t seed = 1;
  int repetitions = 10;
  int top_k = 10;
  double delta = 1e-5;  // Gaussian baseline
  double max_energy = 3000.0;
  // Budget the estimator assumes a release was perturbed with; 0 selects the
  // per-method default (eps/w for LBU, eps for LSP, eps/4 for LBD and LBA).
  double estimation_epsilon = 0.0;
  double benchmark_epsilon = 1.0;
  double benchmark_sensitivity = 3000.0;
  int workers = 0;  // 0 means hardware concurrency
  std::string out_dir = ".";

  double resolved_estimation_epsilon() const;
  void validate() const;
};

// Loads a JSON config file (strict: unknown keys are rejected) over the
// defaults. Flags are applied by the CLI afterwards, so they win over the file.
ExperimentConfig parse_config(const std::optional<std::string>& file_path);

// JSON object echoing every field, used in all result files.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace ldpse
