#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ldpse/config.hpp"
#include "ldpse/datagen.hpp"
#include "ldpse/error.hpp"
#include "ldpse/experiment.hpp"
#include "ldpse/rng.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

// The config file is consumed before CLI11 runs so that flags override file
// values, which in turn override defaults.
std::optional<std::string> find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc - 1; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" || arg == "-c") return std::string(argv[i + 1]);
  }
  return std::nullopt;
}

void add_config_flags(CLI::App* cmd, ldpse::ExperimentConfig& config,
                      std::string& method, std::string& estimator,
                      std::string& dissimilarity, std::string& lsp_rule) {
  cmd->add_option("-c,--config", "JSON config file (parsed before flags)")
      ->expected(1);
  cmd->add_option("--epsilon", config.epsilon, "total privacy budget per window");
  cmd->add_option("--window", config.window, "sliding window size in timestamps");
  cmd->add_option("--levels", config.levels, "number of quantization levels");
  cmd->add_option("--appliances", config.appliances, "roster size");
  cmd->add_option("--users", config.users, "number of simulated users");
  cmd->add_option("--days", config.days, "number of collection rounds");
  cmd->add_option("--method", method, "budget scheduler: lbu|lsp|lbd|lba");
  cmd->add_option("--estimator", estimator, "standard|level_baseline");
  cmd->add_option("--dissimilarity", dissimilarity, "squared|absolute");
  cmd->add_option("--lsp-rule", lsp_rule, "block_start|random_offset");
  cmd->add_option("--data-source", config.data_source,
                  "household|uniform|normal|skew_left|skew_right|csv");
  cmd->add_option("--input", config.input_csv, "input CSV (data-source csv)");
  cmd->add_option("--archetypes", config.archetypes, "household archetype count");
  cmd->add_option("--seed", config.seed, "master seed");
  cmd->add_option("--reps", config.repetitions, "number of repetitions");
  cmd->add_option("--top-k", config.top_k, "ranking depth for hit rate");
  cmd->add_option("--delta", config.delta, "Gaussian baseline delta");
  cmd->add_option("--max-energy", config.max_energy, "range upper bound in watts");
  cmd->add_option("--estimation-epsilon", config.estimation_epsilon,
                  "estimator budget override (0 = per-method default)");
  cmd->add_option("--benchmark-epsilon", config.benchmark_epsilon,
                  "per-reading baseline budget");
  cmd->add_option("--benchmark-sensitivity", config.benchmark_sensitivity,
                  "baseline sensitivity in watts");
  cmd->add_option("--workers", config.workers, "worker threads (0 = hardware)");
  cmd->add_option("--out", config.out_dir, "output directory");
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out.good()) throw std::runtime_error("write failed for " + path.string());
}

int do_generate(const ldpse::ExperimentConfig& config) {
  ldpse::Dataset dataset;
  if (config.data_source == "household") {
    ldpse::HouseholdProfileParams profile;
    profile.max_energy = config.max_energy;
    const ldpse::Dataset seed_panel = ldpse::gen_household_seed(
        config.archetypes, config.appliances, config.days,
        ldpse::Rng::stream(config.seed, 0x5eed).next_u64(), profile);
    const ldpse::ApplianceStats stats = ldpse::derive_stats(seed_panel);
    dataset = ldpse::augment(stats, config.users, config.days,
                             ldpse::Rng::stream(config.seed, 0xa06).next_u64());
  } else {
    ldpse::SyntheticParams params;
    params.max_energy = config.max_energy;
    params.normal_mean = config.max_energy / 2.0;
    params.normal_stddev = config.max_energy / 6.0;
    params.skew_mode = config.max_energy / 6.0;
    dataset = ldpse::gen_synthetic(
        ldpse::parse_distribution(config.data_source), config.users,
        config.appliances, config.days,
        ldpse::Rng::stream(config.seed, 0x5f1).next_u64(), params);
  }
  std::filesystem::create_directories(config.out_dir);
  const std::filesystem::path path =
      std::filesystem::path(config.out_dir) / "dataset.csv";
  ldpse::write_csv(dataset, path.string());
  std::cout << "wrote " << path.string() << " (" << dataset.rows.size() << " rows)\n";
  return 0;
}

int do_run(const ldpse::ExperimentConfig& config) {
  const ldpse::ExperimentOutput output = ldpse::run_experiment(config);
  std::filesystem::create_directories(config.out_dir);
  const std::filesystem::path dir(config.out_dir);
  write_file(dir / "results.json", output.results_json);
  write_file(dir / "summary.txt", output.summary_text);
  std::cout << output.summary_text;
  std::cout << "wrote " << (dir / "results.json").string() << "\n";
  return 0;
}

int do_benchmark(const ldpse::ExperimentConfig& config) {
  const ldpse::BenchmarkOutput output = ldpse::run_benchmark_suite(config);
  std::filesystem::create_directories(config.out_dir);
  const std::filesystem::path dir(config.out_dir);
  write_file(dir / "benchmark.json", output.results_json);
  write_file(dir / "benchmark_summary.txt", output.summary_text);
  std::cout << output.summary_text;
  std::cout << "wrote " << (dir / "benchmark.json").string() << "\n";
  return 0;
}

int do_evaluate(const std::string& results_path) {
  std::ifstream in(results_path, std::ios::binary);
  if (!in.good()) throw ldpse::ValidationError("cannot open " + results_path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  std::cout << ldpse::summarize_results_json(text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally differentially private sharing of per-appliance energy "
               "streams: simulator and evaluation harness"};
  app.require_subcommand(1);

  ldpse::ExperimentConfig config;
  std::string method, estimator, dissimilarity, lsp_rule;
  std::string evaluate_path;

  try {
    config = ldpse::parse_config(find_config_path(argc, argv));
  } catch (const ldpse::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  CLI::App* generate = app.add_subcommand(
      "generate", "generate a dataset CSV (synthetic or augmented household data)");
  CLI::App* run = app.add_subcommand("run", "run the full experiment pipeline");
  CLI::App* benchmark = app.add_subcommand(
      "benchmark", "compare the pipeline against per-reading noise baselines");
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "print the summary for an existing results file");
  evaluate->add_option("results", evaluate_path, "path to results.json")->required();

  for (CLI::App* cmd : {generate, run, benchmark}) {
    add_config_flags(cmd, config, method, estimator, dissimilarity, lsp_rule);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfigError;
  }

  try {
    if (!method.empty()) config.method = ldpse::parse_scheduler(method);
    if (!estimator.empty()) config.estimator = ldpse::parse_estimator(estimator);
    if (!dissimilarity.empty()) {
      ldpse::require(dissimilarity == "squared" || dissimilarity == "absolute",
                     "dissimilarity must be squared or absolute");
      config.dissimilarity_form = dissimilarity == "squared"
                                      ? ldpse::DissimilarityForm::Squared
                                      : ldpse::DissimilarityForm::Absolute;
    }
    if (!lsp_rule.empty()) {
      ldpse::require(lsp_rule == "block_start" || lsp_rule == "random_offset",
                     "lsp-rule must be block_start or random_offset");
      config.lsp_rule = lsp_rule == "block_start" ? ldpse::LspRule::BlockStart
                                                  : ldpse::LspRule::RandomOffset;
    }
    if (app.got_subcommand(evaluate)) return do_evaluate(evaluate_path);
    config.validate();
    if (app.got_subcommand(generate)) return do_generate(config);
    if (app.got_subcommand(run)) return do_run(config);
    if (app.got_subcommand(benchmark)) return do_benchmark(config);
    std::cerr << "no subcommand selected\n";
    return kExitConfigError;
  } catch (const ldpse::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}
