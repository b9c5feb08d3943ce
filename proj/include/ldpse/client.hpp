#pragma once

#include <cstdint>
#include <vector>

#include "ldpse/quantizer.hpp"
#include "ldpse/randomizer.hpp"
#include "ldpse/scheduler.hpp"

namespace ldpse {

// One simulated user's full per-stream state. Scheme and roster must be the
// provider-wide configuration shared by every user of an experiment.
struct UserState {
  std::uint64_t user_id = 0;
  int roster_size = 0;
  QuantizationScheme scheme;
  SchedulerKind scheduler = SchedulerKind::LBA;
  DissimilarityForm dissimilarity_form = DissimilarityForm::Squared;
  int lsp_sampling_offset = 0;
  std::uint64_t seed = 0;  // master seed; per-timestamp streams derive from it
  WindowLedger ledger;

  UserState(std::uint64_t id, int roster, QuantizationScheme s, SchedulerKind kind,
            double epsilon, int window, std::uint64_t master_seed,
            DissimilarityForm form = DissimilarityForm::Squared, int lsp_offset = 0)
      : user_id(id),
        roster_size(roster),
        scheme(std::move(s)),
        scheduler(kind),
        dissimilarity_form(form),
        lsp_sampling_offset(lsp_offset),
        seed(master_seed),
        ledger(epsilon, window, roster, scheme.level_count()) {}
};

struct ReleaseRecord {
  std::uint64_t user_id = 0;
  std::int64_t timestamp = 0;
  Strategy strategy = Strategy::Publish;
  double spent_dissimilarity = 0.0;  // eps_{t,1}
  double spent_publication = 0.0;    // eps_{t,2}
  EncodedVector released;
};

// Map -> encode -> combine -> schedule -> perturb/re-release for one timestamp.
// Timestamps must be presented in strictly increasing order per user.
ReleaseRecord process_timestamp(UserState& state,
                                const std::vector<ApplianceReading>& readings,
                                std::int64_t t);

// Rows for one user across a fixed horizon of day_count timestamps (0-based
// days). Days missing from `rows` are filled with all-appliances-off readings
// so window accounting stays aligned to collection rounds.
struct UserDay {
  std::int64_t day = 0;
  std::vector<ApplianceReading> readings;
};

std::vector<ReleaseRecord> run_stream(UserState& state, std::vector<UserDay> rows,
                                      std::int64_t day_count);

// Audit over emitted records: the largest sliding-window budget total.
double max_window_spend(const std::vector<ReleaseRecord>& records, int window);

}  // namespace ldpse
