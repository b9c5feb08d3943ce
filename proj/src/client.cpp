#include "ldpse/client.hpp"

#include <algorithm>

#include "ldpse/error.hpp"

namespace ldpse {

ReleaseRecord process_timestamp(UserState& state,
                                const std::vector<ApplianceReading>& readings,
                                std::int64_t t) {
  const EncodedVector combined =
      build_combined_vector(readings, state.scheme, state.roster_size);

  PerturbFn perturb_fn = [&state, t](const EncodedVector& v, double epsilon,
                                     PerturbPurpose purpose) {
    const PerturbationParams params = oue_probabilities(epsilon, v.appliance_count);
    Rng rng = Rng::stream(state.seed, state.user_id, static_cast<std::uint64_t>(t),
                          purpose == PerturbPurpose::Dissimilarity ? 1 : 2);
    return perturb(v, params, rng);
  };

  SchedulerDecision decision =
      scheduler_step(state.scheduler, state.ledger, combined, t, perturb_fn,
                     state.lsp_sampling_offset, state.dissimilarity_form);

  ReleaseRecord record;
  record.user_id = state.user_id;
  record.timestamp = t;
  record.strategy = decision.strategy;
  record.spent_dissimilarity = decision.dissimilarity_budget;
  record.spent_publication = decision.publication_budget;
  record.released = std::move(decision.release);
  return record;
}

std::vector<ReleaseRecord> run_stream(UserState& state, std::vector<UserDay> rows,
                                      std::int64_t day_count) {
  require(day_count >= 1, "run_stream: day_count must be positive");
  std::sort(rows.begin(), rows.end(),
            [](const UserDay& a, const UserDay& b) { return a.day < b.day; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    require(rows[i].day != rows[i - 1].day, "run_stream: duplicate day in user rows");
  }

  std::vector<ReleaseRecord> records;
  records.reserve(static_cast<std::size_t>(day_count));
  std::size_t next_row = 0;
  static const std::vector<ApplianceReading> kNoReadings;
  for (std::int64_t day = 0; day < day_count; ++day) {
    const std::vector<ApplianceReading>* readings = &kNoReadings;
    if (next_row < rows.size() && rows[next_row].day == day) {
      readings = &rows[next_row].readings;
      ++next_row;
    }
    records.push_back(process_timestamp(state, *readings, day));
  }
  require(next_row == rows.size(), "run_stream: rows outside the stream horizon");
  return records;
}

double max_window_spend(const std::vector<ReleaseRecord>& records, int window) {
  double worst = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = i; j < records.size() && records[j].timestamp <=
                                                      records[i].timestamp + window - 1;
         ++j) {
      sum += records[j].spent_dissimilarity + records[j].spent_publication;
    }
    worst = std::max(worst, sum);
  }
  return worst;
}

}  // namespace ldpse
