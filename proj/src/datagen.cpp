#include "ldpse/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "ldpse/error.hpp"
#include "ldpse/rng.hpp"

namespace ldpse {

namespace {

double clamp_energy(double v, double max_energy) {
  return std::min(std::max(v, 0.0), max_energy);
}

// Deterministic bijection spreading consumption ranks over appliance ids, so
// that id order does not accidentally coincide with the energy ranking. The
// 15-appliance pattern mirrors a typical household panel ordering.
int rank_to_appliance_id(int rank, int n) {
  static const int kPattern15[15] = {7, 6, 2, 3, 4, 1, 11, 9, 8, 13, 5, 15, 10, 14, 12};
  if (n == 15) return kPattern15[rank];
  int step = 0;
  for (int candidate = 2; candidate < n; ++candidate) {
    if (std::gcd(candidate, n) == 1) {
      step = candidate;
      break;
    }
  }
  if (step == 0) return rank + 1;
  return static_cast<int>((static_cast<long long>(rank) * step) % n) + 1;
}

}  // namespace

Distribution parse_distribution(const std::string& name) {
  if (name == "uniform") return Distribution::Uniform;
  if (name == "normal") return Distribution::Normal;
  if (name == "skew_left") return Distribution::SkewLeft;
  if (name == "skew_right") return Distribution::SkewRight;
  throw ValidationError("unknown distribution: " + name);
}

Dataset gen_synthetic(Distribution distribution, std::int64_t users, int appliances,
                      std::int64_t days, std::uint64_t seed,
                      const SyntheticParams& params) {
  require(users >= 1 && appliances >= 1 && days >= 1,
          "gen_synthetic: users, appliances and days must be positive");
  require(params.max_energy > 0.0, "gen_synthetic: max_energy must be positive");

  const double log_mu = std::log(params.skew_mode) + params.skew_sigma * params.skew_sigma;

  Dataset out;
  out.user_count = users;
  out.appliance_count = appliances;
  out.day_count = days;
  out.rows.reserve(static_cast<std::size_t>(users * days) * appliances);
  for (std::int64_t u = 1; u <= users; ++u) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(u), 0x5d47);
    for (std::int64_t day = 0; day < days; ++day) {
      for (int a = 1; a <= appliances; ++a) {
        double v = 0.0;
        switch (distribution) {
          case Distribution::Uniform:
            v = rng.uniform() * params.max_energy;
            break;
          case Distribution::Normal:
            v = params.normal_mean + params.normal_stddev * rng.normal();
            break;
          case Distribution::SkewRight:
            v = std::exp(log_mu + params.skew_sigma * rng.normal());
            break;
          case Distribution::SkewLeft:
            v = params.max_energy -
                std::exp(log_mu + params.skew_sigma * rng.normal());
            break;
        }
        out.rows.push_back(DatasetRow{u, day, a, clamp_energy(v, params.max_energy)});
      }
    }
  }
  return out;
}

ApplianceStats derive_stats(const Dataset& seed_dataset) {
  require(!seed_dataset.rows.empty(), "derive_stats: empty dataset");
  const int n = seed_dataset.appliance_count;

  std::map<std::int64_t, std::vector<std::vector<double>>> series;
  for (const DatasetRow& row : seed_dataset.rows) {
    auto [it, inserted] = series.try_emplace(row.user_id);
    if (inserted) it->second.resize(static_cast<std::size_t>(n));
    require(row.appliance_id >= 1 && row.appliance_id <= n,
            "derive_stats: appliance id outside roster");
    it->second[static_cast<std::size_t>(row.appliance_id - 1)].push_back(row.watts);
  }

  ApplianceStats stats;
  stats.mean = Eigen::ArrayXXd::Zero(static_cast<Eigen::Index>(series.size()), n);
  stats.stddev = stats.mean;
  stats.lower = stats.mean;
  stats.upper = stats.mean;
  Eigen::Index arch = 0;
  for (const auto& [user, per_appliance] : series) {
    stats.archetype_ids.push_back(user);
    for (int a = 0; a < n; ++a) {
      const std::vector<double>& v = per_appliance[static_cast<std::size_t>(a)];
      require(!v.empty(), "derive_stats: user " + std::to_string(user) +
                              " has no rows for appliance " + std::to_string(a + 1));
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) /
                          static_cast<double>(v.size());
      double var = 0.0;
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (double x : v) {
        var += (x - mean) * (x - mean);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      var /= static_cast<double>(v.size());  // population convention
      stats.mean(arch, a) = mean;
      stats.stddev(arch, a) = std::sqrt(var);
      stats.lower(arch, a) = lo;
      stats.upper(arch, a) = hi;
    }
    ++arch;
  }
  return stats;
}

Dataset augment(const ApplianceStats& stats, std::int64_t target_users,
                std::int64_t days, std::uint64_t seed) {
  const std::int64_t archetypes = stats.archetype_count();
  require(archetypes >= 1, "augment: no archetypes");
  require(target_users >= archetypes,
          "augment: target user count below archetype count");
  require(days >= 1, "augment: days must be positive");
  const int n = stats.appliance_count();

  Dataset out;
  out.user_count = target_users;
  out.appliance_count = n;
  out.day_count = days;
  out.rows.reserve(static_cast<std::size_t>(target_users * days) * n);
  for (std::int64_t u = 1; u <= target_users; ++u) {
    const Eigen::Index arch = static_cast<Eigen::Index>((u - 1) % archetypes);
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(u), 0xa46);
    for (std::int64_t day = 0; day < days; ++day) {
      for (int a = 0; a < n; ++a) {
        double v = stats.mean(arch, a) + stats.stddev(arch, a) * rng.normal();
        v = std::min(std::max(v, stats.lower(arch, a)), stats.upper(arch, a));
        out.rows.push_back(DatasetRow{u, day, a + 1, v});
      }
    }
  }
  return out;
}

Eigen::ArrayXd household_base_means(int appliances, double max_energy) {
  require(appliances >= 1, "household_base_means: appliances must be positive");
  Eigen::ArrayXd ladder(appliances);
  double tail = 0.05 * max_energy;
  for (int rank = 0; rank < appliances; ++rank) {
    if (rank < 10) {
      ladder(rank) = (0.95 - 0.10 * rank) * max_energy;
    } else {
      tail *= 0.8;
      ladder(rank) = tail;
    }
  }
  return ladder;
}

Dataset gen_household_seed(std::int64_t archetypes, int appliances, std::int64_t days,
                           std::uint64_t seed, const HouseholdProfileParams& params) {
  require(archetypes >= 1 && appliances >= 1 && days >= 1,
          "gen_household_seed: archetypes, appliances and days must be positive");
  const Eigen::ArrayXd ladder = household_base_means(appliances, params.max_energy);

  // Base mean per appliance id.
  Eigen::ArrayXd base = Eigen::ArrayXd::Zero(appliances);
  for (int rank = 0; rank < appliances; ++rank) {
    base(rank_to_appliance_id(rank, appliances) - 1) = ladder(rank);
  }

  Dataset out;
  out.user_count = archetypes;
  out.appliance_count = appliances;
  out.day_count = days;
  out.rows.reserve(static_cast<std::size_t>(archetypes * days) * appliances);
  for (std::int64_t u = 1; u <= archetypes; ++u) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(u), 0x710d);
    Eigen::ArrayXd arch_mean(appliances);
    for (int a = 0; a < appliances; ++a) {
      const double factor = std::exp(params.archetype_spread * rng.normal());
      arch_mean(a) = std::min(base(a) * factor, 0.97 * params.max_energy);
    }
    for (std::int64_t day = 0; day < days; ++day) {
      for (int a = 0; a < appliances; ++a) {
        const double v = arch_mean(a) * (1.0 + params.daily_cv * rng.normal());
        out.rows.push_back(
            DatasetRow{u, day, a + 1, clamp_energy(v, params.max_energy)});
      }
    }
  }
  return out;
}

Dataset ingest_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "ingest_csv: cannot open " + path);

  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "ingest_csv: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "user_id,day,appliance_id,watts",
          "ingest_csv: missing or malformed header in " + path);

  Dataset out;
  std::int64_t line_no = 1;
  std::int64_t max_day = -1;
  int max_appliance = 0;
  std::map<std::int64_t, bool> users;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    DatasetRow row;
    char c1 = 0, c2 = 0, c3 = 0;
    fields >> row.user_id >> c1 >> row.day >> c2 >> row.appliance_id >> c3 >> row.watts;
    const bool parsed = !fields.fail() && c1 == ',' && c2 == ',' && c3 == ',';
    require(parsed, "ingest_csv: malformed row at line " + std::to_string(line_no));
    require(row.watts >= 0.0,
            "ingest_csv: negative watts at line " + std::to_string(line_no));
    require(row.day >= 0, "ingest_csv: negative day at line " + std::to_string(line_no));
    require(row.appliance_id >= 1,
            "ingest_csv: appliance id must be >= 1 at line " + std::to_string(line_no));
    users[row.user_id] = true;
    max_day = std::max(max_day, row.day);
    max_appliance = std::max(max_appliance, row.appliance_id);
    out.rows.push_back(row);
  }
  require(!out.rows.empty(), "ingest_csv: no data rows in " + path);
  out.user_count = static_cast<std::int64_t>(users.size());
  out.appliance_count = max_appliance;
  out.day_count = max_day + 1;
  return out;
}

void write_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "write_csv: cannot open " + path);
  out << "user_id,day,appliance_id,watts\n";
  std::ostringstream buffer;
  buffer.precision(10);
  for (const DatasetRow& row : dataset.rows) {
    buffer << row.user_id << ',' << row.day << ',' << row.appliance_id << ','
           << row.watts << '\n';
  }
  out << buffer.str();
  require(out.good(), "write_csv: write failed for " + path);
}

std::vector<UserRows> group_rows_by_user(const Dataset& dataset) {
  std::map<std::int64_t, std::map<std::int64_t, std::vector<ApplianceReading>>> grouped;
  for (const DatasetRow& row : dataset.rows) {
    grouped[row.user_id][row.day].push_back(
        ApplianceReading{row.appliance_id, row.watts});
  }
  std::vector<UserRows> out;
  out.reserve(grouped.size());
  for (auto& [user, by_day] : grouped) {
    UserRows rows;
    rows.user_id = user;
    rows.days.reserve(by_day.size());
    for (auto& [day, readings] : by_day) {
      rows.days.push_back(UserDay{day, std::move(readings)});
    }
    out.push_back(std::move(rows));
  }
  return out;
}

}  // namespace ldpse
