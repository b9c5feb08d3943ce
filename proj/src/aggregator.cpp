#include "ldpse/aggregator.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "ldpse/error.hpp"

namespace ldpse {

AccumulatedRound accumulate(const std::vector<ReleaseRecord>& records) {
  require(!records.empty(), "accumulate: empty collection round");
  AccumulatedRound round;
  round.timestamp = records.front().timestamp;
  round.appliance_count = records.front().released.appliance_count;
  round.level_count = records.front().released.level_count;
  round.sums = Eigen::Array<std::int64_t, Eigen::Dynamic, 1>::Zero(
      records.front().released.bits.size());

  std::set<std::uint64_t> users;
  for (const ReleaseRecord& r : records) {
    require(r.timestamp == round.timestamp, "accumulate: mixed timestamps in round");
    require(r.released.appliance_count == round.appliance_count &&
                r.released.level_count == round.level_count,
            "accumulate: mixed vector dimensions in round");
    require(users.insert(r.user_id).second,
            "accumulate: duplicate user " + std::to_string(r.user_id) + " in round");
    round.sums += r.released.bits.cast<std::int64_t>();
  }
  round.user_count = static_cast<int>(records.size());
  return round;
}

AccumulatedRound merge(const AccumulatedRound& a, const AccumulatedRound& b) {
  require(a.timestamp == b.timestamp, "merge: mixed timestamps");
  require(a.appliance_count == b.appliance_count && a.level_count == b.level_count,
          "merge: mixed dimensions");
  AccumulatedRound out = a;
  out.sums += b.sums;
  out.user_count += b.user_count;
  return out;
}

EstimatedHistogram estimate_histogram(const AccumulatedRound& round,
                                      const PerturbationParams& params,
                                      EstimatorMode mode) {
  require(round.user_count >= 1, "estimate_histogram: no users");
  require(params.p != params.q,
          "estimate_histogram: p == q, estimator undefined (epsilon is 0)");
  const int n = round.appliance_count;
  const int d = round.level_count;

  const double baseline =
      (mode == EstimatorMode::Standard ? static_cast<double>(round.user_count)
                                       : static_cast<double>(d)) *
      params.q;
  const double denom = params.p - params.q;

  EstimatedHistogram hist;
  hist.timestamp = round.timestamp;
  hist.user_count = round.user_count;
  hist.counts = Eigen::ArrayXXd::Zero(n, d);
  for (int a = 0; a < n; ++a) {
    for (int level = 1; level <= d; ++level) {
      const Eigen::Index bit = static_cast<Eigen::Index>(a) * d + (d - level);
      const double y = static_cast<double>(round.sums(bit));
      hist.counts(a, level - 1) = (y - baseline) / denom;
    }
  }
  return hist;
}

Eigen::ArrayXd estimate_energy(const std::vector<EstimatedHistogram>& histograms,
                               const QuantizationScheme& scheme) {
  require(!histograms.empty(), "estimate_energy: no histograms");
  const int d = scheme.level_count();
  const Eigen::Index n = histograms.front().counts.rows();
  Eigen::ArrayXd midpoints(d);
  for (int level = 1; level <= d; ++level) midpoints(level - 1) = scheme.level_midpoint(level);

  Eigen::ArrayXd energy = Eigen::ArrayXd::Zero(n);
  for (const EstimatedHistogram& h : histograms) {
    require(h.counts.rows() == n && h.counts.cols() == d,
            "estimate_energy: histogram does not match scheme dimensions");
    energy += (h.counts.max(0.0).rowwise() * midpoints.transpose()).rowwise().sum();
  }
  return energy;
}

ApplianceRanking top_k(const Eigen::ArrayXd& energies, int k) {
  require(k >= 1 && k <= energies.size(), "top_k: k outside 1..n");
  ApplianceRanking ranking(static_cast<std::size_t>(energies.size()));
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    ranking[static_cast<std::size_t>(i)] = {static_cast<int>(i) + 1, energies(i)};
  }
  std::sort(ranking.begin(), ranking.end(),
            [](const RankedAppliance& a, const RankedAppliance& b) {
              if (a.energy != b.energy) return a.energy > b.energy;
              return a.appliance_id < b.appliance_id;
            });
  ranking.resize(static_cast<std::size_t>(k));
  return ranking;
}

HitRate hit_rate(const ApplianceRanking& truth, const ApplianceRanking& estimated,
                 int k) {
  require(k >= 1, "hit_rate: k must be positive");
  require(static_cast<int>(truth.size()) >= k && static_cast<int>(estimated.size()) >= k,
          "hit_rate: rankings shorter than k");
  HitRate result;
  for (int i = 0; i < k; ++i) {
    if (truth[static_cast<std::size_t>(i)].appliance_id ==
        estimated[static_cast<std::size_t>(i)].appliance_id) {
      ++result.hits;
    }
  }
  result.rate = static_cast<double>(result.hits) / static_cast<double>(k);
  return result;
}

Eigen::ArrayXd impact_shares(const Eigen::ArrayXd& energies) {
  const double total = energies.max(0.0).sum();
  require(total > 0.0, "impact_shares: all energies are zero");
  return energies.max(0.0) / total * 100.0;
}

}  // namespace ldpse
