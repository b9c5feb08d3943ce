#include "ldpse/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ldpse/benchmark.hpp"
#include "ldpse/error.hpp"
#include "ldpse/randomizer.hpp"
#include "ldpse/rng.hpp"

namespace ldpse {

using ordered_json = nlohmann::ordered_json;

namespace {

int resolve_workers(int configured) {
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Contiguous range split; results must not depend on the split, only on the
// per-item work being keyed by item identity.
void parallel_for(std::int64_t count, int workers,
                  const std::function<void(int, std::int64_t, std::int64_t)>& body) {
  workers = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(workers, count)));
  if (workers == 1) {
    body(0, 0, count);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  const std::int64_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = w * chunk;
    const std::int64_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&body, w, begin, end] { body(w, begin, end); });
  }
  for (auto& t : threads) t.join();
}

std::uint64_t repetition_seed(std::uint64_t master, int repetition) {
  return Rng::stream(master, 0x9e11, static_cast<std::uint64_t>(repetition)).next_u64();
}

double median_of(std::vector<int> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ordered_json config_echo(const ExperimentConfig& config) {
  return ordered_json::parse(config_to_json(config));
}

ordered_json ranking_json(const ApplianceRanking& ranking) {
  ordered_json arr = ordered_json::array();
  for (const RankedAppliance& r : ranking) {
    ordered_json item;
    item["appliance"] = r.appliance_id;
    item["energy"] = r.energy;
    arr.push_back(item);
  }
  return arr;
}

ordered_json array_json(const Eigen::ArrayXd& values) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < values.size(); ++i) arr.push_back(values(i));
  return arr;
}

}  // namespace

PreparedData prepare_data(const ExperimentConfig& config) {
  config.validate();
  PreparedData prep;

  if (config.data_source == "household") {
    HouseholdProfileParams profile;
    profile.max_energy = config.max_energy;
    const Dataset seed_panel =
        gen_household_seed(config.archetypes, config.appliances, config.days,
                           Rng::stream(config.seed, 0x5eed).next_u64(), profile);
    const ApplianceStats stats = derive_stats(seed_panel);
    prep.dataset = augment(stats, config.users, config.days,
                           Rng::stream(config.seed, 0xa06).next_u64());
  } else if (config.data_source == "csv") {
    prep.dataset = ingest_csv(config.input_csv);
    require(prep.dataset.appliance_count <= config.appliances,
            "prepare_data: csv contains appliance ids beyond the configured roster");
  } else {
    SyntheticParams params;
    params.max_energy = config.max_energy;
    params.normal_mean = config.max_energy / 2.0;
    params.normal_stddev = config.max_energy / 6.0;
    params.skew_mode = config.max_energy / 6.0;
    prep.dataset = gen_synthetic(parse_distribution(config.data_source), config.users,
                                 config.appliances, config.days,
                                 Rng::stream(config.seed, 0x5f1).next_u64(), params);
  }

  const int n = config.appliances;
  prep.scheme = build_scheme(config.levels, config.max_energy);
  prep.user_rows = group_rows_by_user(prep.dataset);

  const std::int64_t days = prep.dataset.day_count;
  const int d = config.levels;
  prep.true_energy = Eigen::ArrayXd::Zero(n);
  prep.true_level_counts.assign(static_cast<std::size_t>(days),
                                Eigen::ArrayXXd::Zero(n, d));
  for (const UserRows& user : prep.user_rows) {
    // Mirror the client's gap filling: every roster appliance reports every
    // day, absent readings count as 0 W (level 1).
    std::vector<std::vector<char>> reported(
        static_cast<std::size_t>(days), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (const UserDay& day : user.days) {
      require(day.day >= 0 && day.day < days, "prepare_data: day outside horizon");
      for (const ApplianceReading& r : day.readings) {
        require(r.appliance_id >= 1 && r.appliance_id <= n,
                "prepare_data: appliance outside roster");
        prep.true_energy(r.appliance_id - 1) += r.watts;
        const int level = map_reading(r.watts, prep.scheme);
        prep.true_level_counts[static_cast<std::size_t>(day.day)](r.appliance_id - 1,
                                                                  level - 1) += 1.0;
        reported[static_cast<std::size_t>(day.day)]
                [static_cast<std::size_t>(r.appliance_id - 1)] = 1;
      }
    }
    for (std::int64_t day = 0; day < days; ++day) {
      for (int a = 0; a < n; ++a) {
        if (!reported[static_cast<std::size_t>(day)][static_cast<std::size_t>(a)]) {
          prep.true_level_counts[static_cast<std::size_t>(day)](a, 0) += 1.0;
        }
      }
    }
  }
  prep.true_ranking = top_k(prep.true_energy, n);
  return prep;
}

RepetitionResult run_repetition(const PreparedData& prepared,
                                const ExperimentConfig& config, int repetition) {
  const int n = static_cast<int>(prepared.true_energy.size());
  const int d = config.levels;
  const std::int64_t days = prepared.dataset.day_count;
  const std::int64_t user_count = static_cast<std::int64_t>(prepared.user_rows.size());
  const std::uint64_t rep_seed = repetition_seed(config.seed, repetition);
  const int workers = resolve_workers(config.workers);

  using Sums = std::vector<Eigen::Array<std::int64_t, Eigen::Dynamic, 1>>;
  std::vector<Sums> partial(static_cast<std::size_t>(workers));
  std::vector<double> worst_window(static_cast<std::size_t>(workers), 0.0);
  std::vector<std::int64_t> publishes(static_cast<std::size_t>(workers), 0);
  std::vector<std::int64_t> approximations(static_cast<std::size_t>(workers), 0);
  std::vector<double> seconds(static_cast<std::size_t>(workers), 0.0);

  parallel_for(user_count, workers, [&](int worker, std::int64_t begin, std::int64_t end) {
    Sums& sums = partial[static_cast<std::size_t>(worker)];
    sums.assign(static_cast<std::size_t>(days),
                Eigen::Array<std::int64_t, Eigen::Dynamic, 1>::Zero(
                    static_cast<Eigen::Index>(n) * d));
    const auto start = std::chrono::steady_clock::now();
    for (std::int64_t u = begin; u < end; ++u) {
      const UserRows& rows = prepared.user_rows[static_cast<std::size_t>(u)];
      const std::uint64_t uid = static_cast<std::uint64_t>(rows.user_id);
      int lsp_offset = 0;
      if (config.lsp_rule == LspRule::RandomOffset) {
        lsp_offset = static_cast<int>(
            Rng::stream(rep_seed, uid, 0x10f5).uniform_index(
                static_cast<std::uint64_t>(config.window)));
      }
      UserState state(uid, n, prepared.scheme, config.method, config.epsilon,
                      config.window, rep_seed, config.dissimilarity_form, lsp_offset);
      const std::vector<ReleaseRecord> records =
          run_stream(state, rows.days, days);
      for (const ReleaseRecord& r : records) {
        sums[static_cast<std::size_t>(r.timestamp)] +=
            r.released.bits.cast<std::int64_t>();
        if (r.strategy == Strategy::Publish) {
          ++publishes[static_cast<std::size_t>(worker)];
        } else {
          ++approximations[static_cast<std::size_t>(worker)];
        }
      }
      worst_window[static_cast<std::size_t>(worker)] =
          std::max(worst_window[static_cast<std::size_t>(worker)],
                   max_window_spend(records, config.window));
    }
    seconds[static_cast<std::size_t>(worker)] +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  const PerturbationParams est_params =
      oue_probabilities(config.resolved_estimation_epsilon(), n);
  std::vector<EstimatedHistogram> histograms;
  histograms.reserve(static_cast<std::size_t>(days));
  for (std::int64_t day = 0; day < days; ++day) {
    AccumulatedRound round;
    round.timestamp = day;
    round.appliance_count = n;
    round.level_count = d;
    round.user_count = static_cast<int>(user_count);
    round.sums = Eigen::Array<std::int64_t, Eigen::Dynamic, 1>::Zero(
        static_cast<Eigen::Index>(n) * d);
    for (const Sums& sums : partial) {
      if (!sums.empty()) round.sums += sums[static_cast<std::size_t>(day)];
    }
    histograms.push_back(estimate_histogram(round, est_params, config.estimator));
  }

  RepetitionResult result;
  result.estimated_energy = estimate_energy(histograms, prepared.scheme);
  const ApplianceRanking estimated_ranking = top_k(result.estimated_energy, n);
  result.hit = hit_rate(prepared.true_ranking, estimated_ranking, config.top_k);
  result.similarity =
      similarity_report(prepared.true_level_counts, histograms, prepared.scheme);
  for (double w : worst_window) result.max_window_spend = std::max(result.max_window_spend, w);
  for (std::int64_t p : publishes) result.publish_count += p;
  for (std::int64_t a : approximations) result.approximate_count += a;
  for (double s : seconds) result.release_seconds += s;
  result.release_count = user_count * days;
  return result;
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  const PreparedData prepared = prepare_data(config);
  const int n = static_cast<int>(prepared.true_energy.size());

  std::vector<int> hits;
  std::vector<double> mean_ps;
  std::vector<int> above_threshold;
  Eigen::ArrayXd energy_sum = Eigen::ArrayXd::Zero(n);
  Eigen::ArrayXd p_sum = Eigen::ArrayXd::Zero(n);
  Eigen::ArrayXi p_counts = Eigen::ArrayXi::Zero(n);
  double max_window = 0.0;
  std::int64_t publish_total = 0;
  std::int64_t approx_total = 0;
  int degenerate_total = 0;

  for (int rep = 0; rep < config.repetitions; ++rep) {
    const RepetitionResult r = run_repetition(prepared, config, rep);
    hits.push_back(r.hit.hits);
    mean_ps.push_back(r.similarity.mean_p);
    above_threshold.push_back(r.similarity.appliances_above_threshold);
    energy_sum += r.estimated_energy;
    for (Eigen::Index a = 0; a < n; ++a) {
      if (!std::isnan(r.similarity.p_values(a))) {
        p_sum(a) += r.similarity.p_values(a);
        p_counts(a) += 1;
      }
    }
    degenerate_total += r.similarity.degenerate_count;
    max_window = std::max(max_window, r.max_window_spend);
    publish_total += r.publish_count;
    approx_total += r.approximate_count;
  }

  const Eigen::ArrayXd energy_mean = energy_sum / config.repetitions;
  Eigen::ArrayXd p_mean(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    p_mean(a) = p_counts(a) > 0 ? p_sum(a) / p_counts(a)
                                : std::numeric_limits<double>::quiet_NaN();
  }

  double overall_mean_p = 0.0;
  int overall_p_count = 0;
  for (double p : mean_ps) {
    if (!std::isnan(p)) {
      overall_mean_p += p;
      ++overall_p_count;
    }
  }
  overall_mean_p = overall_p_count > 0
                       ? overall_mean_p / overall_p_count
                       : std::numeric_limits<double>::quiet_NaN();

  const double hits_mean =
      std::accumulate(hits.begin(), hits.end(), 0.0) / hits.size();
  const int hits_min = *std::min_element(hits.begin(), hits.end());
  const int hits_max = *std::max_element(hits.begin(), hits.end());

  const ApplianceRanking estimated_ranking = top_k(energy_mean, n);

  ordered_json out;
  out["schema_version"] = 1;
  out["kind"] = "run";
  out["config"] = config_echo(config);
  ordered_json results;
  ordered_json hit_json;
  hit_json["mean"] = hits_mean;
  hit_json["median"] = median_of(hits);
  hit_json["min"] = hits_min;
  hit_json["max"] = hits_max;
  hit_json["top_k"] = config.top_k;
  hit_json["per_repetition"] = hits;
  results["hit_rate"] = hit_json;

  ordered_json kw;
  kw["mean_p"] = overall_mean_p;
  kw["per_appliance_mean_p"] = array_json(p_mean);
  kw["per_repetition_mean_p"] = mean_ps;
  kw["appliances_above_0.05_per_repetition"] = above_threshold;
  kw["degenerate_appliance_repetitions"] = degenerate_total;
  results["kruskal_wallis"] = kw;

  results["true_top_k"] = ranking_json(top_k(prepared.true_energy, config.top_k));
  results["estimated_top_k"] =
      ranking_json(ApplianceRanking(estimated_ranking.begin(),
                                    estimated_ranking.begin() + config.top_k));
  results["true_impact_shares"] = array_json(impact_shares(prepared.true_energy));
  results["estimated_impact_shares"] = array_json(impact_shares(energy_mean));
  results["estimated_energy_mean"] = array_json(energy_mean);
  results["true_energy"] = array_json(prepared.true_energy);

  ordered_json w_event;
  w_event["epsilon"] = config.epsilon;
  w_event["window"] = config.window;
  w_event["max_window_spend"] = max_window;
  w_event["within_budget"] = max_window <= config.epsilon + 1e-9;
  results["w_event"] = w_event;

  ordered_json strategies;
  strategies["publish"] = publish_total;
  strategies["approximate"] = approx_total;
  results["strategies"] = strategies;

  out["results"] = results;

  ExperimentOutput output;
  output.results_json = out.dump(2) + "\n";
  output.summary_text = summarize_results_json(output.results_json);
  return output;
}

BenchmarkOutput run_benchmark_suite(const ExperimentConfig& config) {
  const PreparedData prepared = prepare_data(config);
  const int n = static_cast<int>(prepared.true_energy.size());
  const std::int64_t days = prepared.dataset.day_count;
  const std::int64_t user_count = static_cast<std::int64_t>(prepared.user_rows.size());
  const int workers = resolve_workers(config.workers);

  // Per-user true totals and rankings; the per-reading baselines release
  // per-household data, so their fidelity is measured per household.
  Eigen::ArrayXXd user_totals = Eigen::ArrayXXd::Zero(user_count, n);
  for (std::int64_t u = 0; u < user_count; ++u) {
    for (const UserDay& day : prepared.user_rows[static_cast<std::size_t>(u)].days) {
      for (const ApplianceReading& r : day.readings) {
        user_totals(u, r.appliance_id - 1) += r.watts;
      }
    }
  }
  std::vector<ApplianceRanking> user_rankings;
  user_rankings.reserve(static_cast<std::size_t>(user_count));
  for (std::int64_t u = 0; u < user_count; ++u) {
    user_rankings.push_back(top_k(user_totals.row(u).transpose(), n));
  }

  NoiseOptions options;
  options.delta = config.delta;
  // Every baseline protects each reading at the fixed budget, so the gamma
  // mechanism uses whole (shape 1) variates; the divisible shape-1/k variant
  // protects only the cross-user aggregate.
  options.gamma_fraction = 1.0;
  for (int level = 1; level <= config.levels; ++level) {
    options.grid.push_back(prepared.scheme.level_midpoint(level));
  }

  BenchmarkOutput output;
  const NoiseKind kinds[] = {NoiseKind::Laplace, NoiseKind::Gamma, NoiseKind::Gaussian,
                             NoiseKind::ExponentialMech};
  for (NoiseKind kind : kinds) {
    double hit_sum = 0.0;
    double elapsed = 0.0;
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const std::uint64_t rep_seed =
          Rng::stream(config.seed, 0xbe7c, static_cast<std::uint64_t>(rep),
                      static_cast<std::uint64_t>(kind))
              .next_u64();
      std::vector<double> worker_hits(static_cast<std::size_t>(workers), 0.0);
      std::vector<double> worker_seconds(static_cast<std::size_t>(workers), 0.0);
      parallel_for(user_count, workers,
                   [&](int worker, std::int64_t begin, std::int64_t end) {
        const auto start = std::chrono::steady_clock::now();
        for (std::int64_t u = begin; u < end; ++u) {
          const UserRows& rows = prepared.user_rows[static_cast<std::size_t>(u)];
          Rng rng = Rng::stream(rep_seed, static_cast<std::uint64_t>(rows.user_id));
          Eigen::ArrayXd noisy_total = Eigen::ArrayXd::Zero(n);
          std::vector<char> seen(static_cast<std::size_t>(n), 0);
          for (const UserDay& day : rows.days) {
            std::fill(seen.begin(), seen.end(), 0);
            for (const ApplianceReading& r : day.readings) {
              noisy_total(r.appliance_id - 1) += benchmark_noise(
                  kind, r.watts, config.benchmark_epsilon,
                  config.benchmark_sensitivity, rng, options);
              seen[static_cast<std::size_t>(r.appliance_id - 1)] = 1;
            }
            for (int a = 0; a < n; ++a) {
              if (!seen[static_cast<std::size_t>(a)]) {
                noisy_total(a) += benchmark_noise(kind, 0.0, config.benchmark_epsilon,
                                                  config.benchmark_sensitivity, rng,
                                                  options);
              }
            }
          }
          const ApplianceRanking est = top_k(noisy_total, n);
          worker_hits[static_cast<std::size_t>(worker)] +=
              hit_rate(user_rankings[static_cast<std::size_t>(u)], est, config.top_k)
                  .hits;
        }
        worker_seconds[static_cast<std::size_t>(worker)] +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
      });
      for (double h : worker_hits) hit_sum += h;
      for (double s : worker_seconds) elapsed += s;
    }
    MechanismResult mech;
    mech.name = noise_kind_name(kind);
    mech.mean_hits = hit_sum / static_cast<double>(user_count * config.repetitions);
    mech.mean_rate = mech.mean_hits / config.top_k;
    mech.mean_release_ms =
        elapsed * 1e3 / static_cast<double>(user_count * days * config.repetitions);
    output.mechanisms.push_back(mech);
  }

  // The pipeline itself, measured on the population ranking.
  {
    double hit_sum = 0.0;
    double elapsed = 0.0;
    std::int64_t releases = 0;
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const RepetitionResult r = run_repetition(prepared, config, rep);
      hit_sum += r.hit.hits;
      elapsed += r.release_seconds;
      releases += r.release_count;
    }
    MechanismResult mech;
    mech.name = "ldp_smartenergy";
    mech.mean_hits = hit_sum / config.repetitions;
    mech.mean_rate = mech.mean_hits / config.top_k;
    mech.mean_release_ms = elapsed * 1e3 / static_cast<double>(releases);
    output.mechanisms.push_back(mech);
  }

  ordered_json out;
  out["schema_version"] = 1;
  out["kind"] = "benchmark";
  out["config"] = config_echo(config);
  ordered_json rows = ordered_json::array();
  for (const MechanismResult& m : output.mechanisms) {
    ordered_json row;
    row["mechanism"] = m.name;
    row["mean_hits"] = m.mean_hits;
    row["mean_hit_rate"] = m.mean_rate;
    row["mean_release_ms"] = m.mean_release_ms;
    rows.push_back(row);
  }
  out["results"] = rows;
  output.results_json = out.dump(2) + "\n";
  output.summary_text = summarize_results_json(output.results_json);
  return output;
}

std::string summarize_results_json(const std::string& json_text) {
  const ordered_json doc = ordered_json::parse(json_text);
  std::ostringstream out;
  out.setf(std::ios::fixed);
  const std::string kind = doc.value("kind", "unknown");
  const auto& config = doc.at("config");

  if (kind == "run") {
    const auto& results = doc.at("results");
    const auto& hit = results.at("hit_rate");
    out << "experiment summary\n";
    out << "  method=" << config.at("method").get<std::string>()
        << " epsilon=" << config.at("epsilon").get<double>()
        << " window=" << config.at("window").get<int>()
        << " levels=" << config.at("levels").get<int>()
        << " appliances=" << config.at("appliances").get<int>()
        << " users=" << config.at("users").get<std::int64_t>()
        << " days=" << config.at("days").get<std::int64_t>()
        << " seed=" << config.at("seed").get<std::uint64_t>()
        << " repetitions=" << config.at("repetitions").get<int>() << "\n\n";

    out.precision(3);
    out << "hit rate (top-" << hit.at("top_k").get<int>() << ", "
        << hit.at("per_repetition").size() << " repetitions)\n";
    out << "  mean=" << hit.at("mean").get<double>()
        << " median=" << hit.at("median").get<double>()
        << " min=" << hit.at("min").get<int>() << " max=" << hit.at("max").get<int>()
        << "\n\n";

    const auto& kw = doc.at("results").at("kruskal_wallis");
    out.precision(6);
    out << "kruskal-wallis similarity\n";
    out << "  mean p-value over appliances and repetitions: ";
    if (kw.at("mean_p").is_null()) {
      out << "n/a (degenerate)";
    } else {
      out << kw.at("mean_p").get<double>();
    }
    out << "\n  per-appliance mean p: ";
    for (const auto& p : kw.at("per_appliance_mean_p")) {
      if (p.is_null()) {
        out << "n/a ";
      } else {
        out << p.get<double>() << ' ';
      }
    }
    out << "\n\n";

    out.precision(1);
    out << "top-" << hit.at("top_k").get<int>() << " appliances (true vs estimated)\n";
    const auto& true_top = results.at("true_top_k");
    const auto& est_top = results.at("estimated_top_k");
    for (std::size_t i = 0; i < true_top.size(); ++i) {
      out << "  " << (i + 1) << ". A" << true_top[i].at("appliance").get<int>() << " ("
          << true_top[i].at("energy").get<double>() << " Wd)  vs  A"
          << est_top[i].at("appliance").get<int>() << " ("
          << est_top[i].at("energy").get<double>() << " Wd)\n";
    }
    out << "\n";

    out.precision(2);
    out << "impact shares, percent (true / estimated)\n  ";
    const auto& ts = results.at("true_impact_shares");
    const auto& es = results.at("estimated_impact_shares");
    for (std::size_t a = 0; a < ts.size(); ++a) {
      out << "A" << (a + 1) << "=" << ts[a].get<double>() << "/" << es[a].get<double>()
          << " ";
    }
    out << "\n\n";

    out.precision(9);
    const auto& we = results.at("w_event");
    out << "w-event accounting: max window spend "
        << we.at("max_window_spend").get<double>() << " of budget "
        << we.at("epsilon").get<double>() << " ("
        << (we.at("within_budget").get<bool>() ? "within budget" : "EXCEEDED") << ")\n";
    const auto& strategies = results.at("strategies");
    out << "strategies: publish=" << strategies.at("publish").get<std::int64_t>()
        << " approximate=" << strategies.at("approximate").get<std::int64_t>() << "\n";
    return out.str();
  }

  if (kind == "benchmark") {
    out << "benchmark summary (baselines at epsilon="
        << config.at("benchmark_epsilon").get<double>()
        << " per appliance per timestamp, sensitivity="
        << config.at("benchmark_sensitivity").get<double>() << ")\n";
    out << "  baseline hit rates are per-household; the pipeline's is on the "
           "population ranking\n\n";
    out.precision(4);
    out << "  mechanism          mean_hits  mean_rate  ms/release\n";
    for (const auto& row : doc.at("results")) {
      std::string name = row.at("mechanism").get<std::string>();
      name.resize(18, ' ');
      out << "  " << name << " " << row.at("mean_hits").get<double>() << "     "
          << row.at("mean_hit_rate").get<double>() << "     "
          << row.at("mean_release_ms").get<double>() << "\n";
    }
    return out.str();
  }

  throw ValidationError("summarize_results_json: unknown results kind " + kind);
}

}  // namespace ldpse
