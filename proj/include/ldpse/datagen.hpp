#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ldpse/client.hpp"

namespace ldpse {

struct DatasetRow {
  std::int64_t user_id = 0;
  std::int64_t day = 0;
  int appliance_id = 0;
  double watts = 0.0;
};

struct Dataset {
  std::vector<DatasetRow> rows;  // canonical order: user, then day, then appliance
  std::int64_t user_count = 0;
  int appliance_count = 0;
  std::int64_t day_count = 0;
};

enum class Distribution { Uniform, Normal, SkewLeft, SkewRight };
Distribution parse_distribution(const std::string& name);

struct SyntheticParams {
  double max_energy = 3000.0;
  // Normal family; defaults centre the mass inside the range.
  double normal_mean = 1500.0;
  double normal_stddev = 500.0;
  // Skewed families are a truncated log-normal and its reflection; the mode
  // parameter keeps the peak inside the range.
  double skew_mode = 500.0;
  double skew_sigma = 0.75;
};

// Values drawn from the named family, clamped to [0, max_energy].
Dataset gen_synthetic(Distribution distribution, std::int64_t users, int appliances,
                      std::int64_t days, std::uint64_t seed,
                      const SyntheticParams& params = {});

// Per (archetype user, appliance) statistics of a seed dataset. Standard
// deviation uses the population (divide-by-N) convention.
struct ApplianceStats {
  std::vector<std::int64_t> archetype_ids;
  Eigen::ArrayXXd mean;    // archetypes x appliances
  Eigen::ArrayXXd stddev;
  Eigen::ArrayXXd lower;
  Eigen::ArrayXXd upper;

  std::int64_t archetype_count() const { return archetype_ids.size(); }
  int appliance_count() const { return static_cast<int>(mean.cols()); }
};

ApplianceStats derive_stats(const Dataset& seed_dataset);

// Each synthetic user clones an archetype round-robin and draws daily values
// from a normal with the archetype's per-appliance mean and stddev, clamped to
// the archetype's observed bounds.
Dataset augment(const ApplianceStats& stats, std::int64_t target_users,
                std::int64_t days, std::uint64_t seed);

// Household-style seed data standing in for a small real-world panel: each
// appliance has a base load on a descending ladder (so the population has a
// clear consumption ranking), archetypes vary around the base multiplicatively
// and days add relative noise.
struct HouseholdProfileParams {
  double max_energy = 3000.0;
  double archetype_spread = 0.02;  // log-scale spread across archetypes
  double daily_cv = 0.04;          // per-day relative standard deviation
};

Dataset gen_household_seed(std::int64_t archetypes, int appliances, std::int64_t days,
                           std::uint64_t seed, const HouseholdProfileParams& params = {});

// Base watt ladder used by gen_household_seed, exposed for tests.
Eigen::ArrayXd household_base_means(int appliances, double max_energy);

// CSV schema: header "user_id,day,appliance_id,watts", one reading per row,
// days are 0-based integers.
Dataset ingest_csv(const std::string& path);
void write_csv(const Dataset& dataset, const std::string& path);

// Per-user rows in stream form, ordered by user id ascending.
struct UserRows {
  std::int64_t user_id = 0;
  std::vector<UserDay> days;
};
std::vector<UserRows> group_rows_by_user(const Dataset& dataset);

}  // namespace ldpse
