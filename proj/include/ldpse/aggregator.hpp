#pragma once

#include <cstdint>
#include <vector>

#include "ldpse/client.hpp"
#include "ldpse/quantizer.hpp"
#include "ldpse/randomizer.hpp"

namespace ldpse {

// Position-wise sums of released bit vectors for one collection round.
struct AccumulatedRound {
  std::int64_t timestamp = 0;
  Eigen::Array<std::int64_t, Eigen::Dynamic, 1> sums;  // length d*n
  int user_count = 0;
  int appliance_count = 0;
  int level_count = 0;
};

AccumulatedRound accumulate(const std::vector<ReleaseRecord>& records);
// Associative combine of partial sums from disjoint user groups.
AccumulatedRound merge(const AccumulatedRound& a, const AccumulatedRound& b);

enum class EstimatorMode {
  Standard,      // (y - k*q) / (p - q), unbiased for OUE counts
  LevelBaseline,  // (y - d*q) / (p - q)
};

// Estimated user counts per (appliance, level); counts may be negative, they
// are only clamped downstream by the energy application.
struct EstimatedHistogram {
  std::int64_t timestamp = 0;
  Eigen::ArrayXXd counts;  // n rows, d columns; column j is level j+1
  int user_count = 0;
};

EstimatedHistogram estimate_histogram(const AccumulatedRound& round,
                                      const PerturbationParams& params,
                                      EstimatorMode mode = EstimatorMode::Standard);

// Per-appliance watt totals over a span: sum of clamped counts times the
// midpoint of each level's range.
Eigen::ArrayXd estimate_energy(const std::vector<EstimatedHistogram>& histograms,
                               const QuantizationScheme& scheme);

struct RankedAppliance {
  int appliance_id = 0;  // 1-based
  double energy = 0.0;
};
using ApplianceRanking = std::vector<RankedAppliance>;

// Descending by energy, ties broken by appliance index; truncated to k.
ApplianceRanking top_k(const Eigen::ArrayXd& energies, int k);

struct HitRate {
  int hits = 0;
  double rate = 0.0;
};

// Positions in 1..k where both rankings name the same appliance.
HitRate hit_rate(const ApplianceRanking& truth, const ApplianceRanking& estimated,
                 int k);

// Percent of total per appliance; requires at least one positive energy.
Eigen::ArrayXd impact_shares(const Eigen::ArrayXd& energies);

}  // namespace ldpse
