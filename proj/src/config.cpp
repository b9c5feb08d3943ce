#include "ldpse/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "ldpse/error.hpp"

namespace ldpse {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

SchedulerKind parse_scheduler(const std::string& name) {
  if (name == "lbu" || name == "LBU") return SchedulerKind::LBU;
  if (name == "lsp" || name == "LSP") return SchedulerKind::LSP;
  if (name == "lbd" || name == "LBD") return SchedulerKind::LBD;
  if (name == "lba" || name == "LBA") return SchedulerKind::LBA;
  throw ValidationError("unknown scheduler method: " + name);
}

std::string scheduler_name(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::LBU: return "lbu";
    case SchedulerKind::LSP: return "lsp";
    case SchedulerKind::LBD: return "lbd";
    case SchedulerKind::LBA: return "lba";
  }
  return "unknown";
}

EstimatorMode parse_estimator(const std::string& name) {
  if (name == "standard") return EstimatorMode::Standard;
  if (name == "level_baseline") return EstimatorMode::LevelBaseline;
  throw ValidationError("unknown estimator mode: " + name);
}

std::string estimator_name(EstimatorMode mode) {
  return mode == EstimatorMode::Standard ? "standard" : "level_baseline";
}

double ExperimentConfig::resolved_estimation_epsilon() const {
  if (estimation_epsilon > 0.0) return estimation_epsilon;
  switch (method) {
    case SchedulerKind::LBU: return epsilon / window;
    case SchedulerKind::LSP: return epsilon;
    case SchedulerKind::LBD:
    case SchedulerKind::LBA: return epsilon / 4.0;
  }
  return epsilon;
}

void ExperimentConfig::validate() const {
  require(epsilon > 0.0, "config: epsilon must be positive");
  require(window >= 1, "config: window must be at least 1");
  require(levels >= 2, "config: levels must be at least 2");
  require(appliances >= 1, "config: appliances must be at least 1");
  require(users >= 1, "config: users must be at least 1");
  require(days >= 1, "config: days must be at least 1");
  require(archetypes >= 1, "config: archetypes must be at least 1");
  require(repetitions >= 1, "config: repetitions must be at least 1");
  require(top_k >= 1, "config: top_k must be at least 1");
  require(top_k <= appliances, "config: top_k cannot exceed appliance count");
  require(delta > 0.0 && delta < 1.0, "config: delta must be in (0, 1)");
  require(max_energy > 0.0, "config: max_energy must be positive");
  require(estimation_epsilon >= 0.0, "config: estimation_epsilon cannot be negative");
  require(benchmark_epsilon > 0.0, "config: benchmark_epsilon must be positive");
  require(benchmark_sensitivity > 0.0, "config: benchmark_sensitivity must be positive");
  require(workers >= 0, "config: workers cannot be negative");
  const std::set<std::string> sources = {"household", "uniform",   "normal",
                                         "skew_left", "skew_right", "csv"};
  require(sources.count(data_source) == 1, "config: unknown data_source " + data_source);
  if (data_source == "csv") {
    require(!input_csv.empty(), "config: data_source csv requires input_csv");
  }
}

ExperimentConfig parse_config(const std::optional<std::string>& file_path) {
  ExperimentConfig config;
  if (const char* env = std::getenv("LDPSE_OUT_DIR"); env != nullptr && *env != '\0') {
    config.out_dir = env;
  }
  if (!file_path) return config;

  std::ifstream in(*file_path);
  require(in.good(), "config: cannot open " + *file_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config: invalid JSON in " + *file_path + ": " + e.what());
  }
  require(doc.is_object(), "config: top level must be a JSON object");

  const std::set<std::string> known = {
      "epsilon",        "window",          "levels",
      "appliances",     "users",           "days",
      "method",         "estimator",       "dissimilarity_form",
      "lsp_rule",       "data_source",     "input_csv",
      "archetypes",     "seed",            "repetitions",
      "top_k",          "delta",           "max_energy",
      "estimation_epsilon", "benchmark_epsilon", "benchmark_sensitivity",
      "workers",        "out_dir"};
  for (const auto& [key, value] : doc.items()) {
    require(known.count(key) == 1, "config: unknown key \"" + key + "\"");
  }

  try {
    if (doc.contains("epsilon")) config.epsilon = doc["epsilon"].get<double>();
    if (doc.contains("window")) config.window = doc["window"].get<int>();
    if (doc.contains("levels")) config.levels = doc["levels"].get<int>();
    if (doc.contains("appliances")) config.appliances = doc["appliances"].get<int>();
    if (doc.contains("users")) config.users = doc["users"].get<std::int64_t>();
    if (doc.contains("days")) config.days = doc["days"].get<std::int64_t>();
    if (doc.contains("method")) config.method = parse_scheduler(doc["method"].get<std::string>());
    if (doc.contains("estimator")) {
      config.estimator = parse_estimator(doc["estimator"].get<std::string>());
    }
    if (doc.contains("dissimilarity_form")) {
      const std::string form = doc["dissimilarity_form"].get<std::string>();
      require(form == "squared" || form == "absolute",
              "config: dissimilarity_form must be squared or absolute");
      config.dissimilarity_form =
          form == "squared" ? DissimilarityForm::Squared : DissimilarityForm::Absolute;
    }
    if (doc.contains("lsp_rule")) {
      const std::string rule = doc["lsp_rule"].get<std::string>();
      require(rule == "block_start" || rule == "random_offset",
              "config: lsp_rule must be block_start or random_offset");
      config.lsp_rule =
          rule == "block_start" ? LspRule::BlockStart : LspRule::RandomOffset;
    }
    if (doc.contains("data_source")) config.data_source = doc["data_source"].get<std::string>();
    if (doc.contains("input_csv")) config.input_csv = doc["input_csv"].get<std::string>();
    if (doc.contains("archetypes")) config.archetypes = doc["archetypes"].get<std::int64_t>();
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("repetitions")) config.repetitions = doc["repetitions"].get<int>();
    if (doc.contains("top_k")) config.top_k = doc["top_k"].get<int>();
    if (doc.contains("delta")) config.delta = doc["delta"].get<double>();
    if (doc.contains("max_energy")) config.max_energy = doc["max_energy"].get<double>();
    if (doc.contains("estimation_epsilon")) {
      config.estimation_epsilon = doc["estimation_epsilon"].get<double>();
    }
    if (doc.contains("benchmark_epsilon")) {
      config.benchmark_epsilon = doc["benchmark_epsilon"].get<double>();
    }
    if (doc.contains("benchmark_sensitivity")) {
      config.benchmark_sensitivity = doc["benchmark_sensitivity"].get<double>();
    }
    if (doc.contains("workers")) config.workers = doc["workers"].get<int>();
    if (doc.contains("out_dir")) config.out_dir = doc["out_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: type error: ") + e.what());
  }
  return config;
}

std::string config_to_json(const ExperimentConfig& config) {
  ordered_json j;
  j["epsilon"] = config.epsilon;
  j["window"] = config.window;
  j["levels"] = config.levels;
  j["appliances"] = config.appliances;
  j["users"] = config.users;
  j["days"] = config.days;
  j["method"] = scheduler_name(config.method);
  j["estimator"] = estimator_name(config.estimator);
  j["dissimilarity_form"] =
      config.dissimilarity_form == DissimilarityForm::Squared ? "squared" : "absolute";
  j["lsp_rule"] = config.lsp_rule == LspRule::BlockStart ? "block_start" : "random_offset";
  j["data_source"] = config.data_source;
  j["input_csv"] = config.input_csv;
  j["archetypes"] = config.archetypes;
  j["seed"] = config.seed;
  j["repetitions"] = config.repetitions;
  j["top_k"] = config.top_k;
  j["delta"] = config.delta;
  j["max_energy"] = config.max_energy;
  j["estimation_epsilon"] = config.estimation_epsilon;
  j["resolved_estimation_epsilon"] = config.resolved_estimation_epsilon();
  j["benchmark_epsilon"] = config.benchmark_epsilon;
  j["benchmark_sensitivity"] = config.benchmark_sensitivity;
  // workers and out_dir are execution details: they must not influence result
  // bytes, so they are not echoed.
  return j.dump(2);
}

}  // namespace ldpse
