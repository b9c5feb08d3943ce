#pragma once

#include <cstdint>
#include <deque>
#include <functional>

#include "ldpse/quantizer.hpp"

namespace ldpse {

enum class SchedulerKind { LBU, LSP, LBD, LBA };
enum class Strategy { Publish, Approximate };

// Algorithmically the dissimilarity is a mean of squared per-position
// differences; for bit vectors the squared and absolute forms coincide, but the
// absolute variant is kept selectable for sensitivity analysis.
enum class DissimilarityForm { Squared, Absolute };

double dissimilarity(const BitArray& a, const BitArray& b,
                     DissimilarityForm form = DissimilarityForm::Squared);

// Inner perturbation hook used by the adaptive schedulers. The purpose tag lets
// callers derive independent randomness for the dissimilarity probe and the
// publication candidate.
enum class PerturbPurpose { Dissimilarity, Publication };
using PerturbFn =
    std::function<EncodedVector(const EncodedVector&, double epsilon, PerturbPurpose)>;

struct SchedulerDecision {
  Strategy strategy = Strategy::Publish;
  double dissimilarity_budget = 0.0;  // eps_{t,1} spent at this timestamp
  double publication_budget = 0.0;    // eps_{t,2} consumed by the release (0 on approximate)
  EncodedVector release;
};

// Per-user budget ledger over a sliding window of w timestamps. Entries older
// than t-w+1 are evicted eagerly; the last publication (timestamp, budget,
// released vector) is kept separately because LBA's absorption rule needs it
// even after the window has moved past it. Before any publication the last
// release is the all-zeros vector, which bootstraps the first comparison.
class WindowLedger {
 public:
  WindowLedger(double epsilon, int window_size, int appliance_count, int level_count);

  double epsilon() const { return epsilon_; }
  int window() const { return window_; }

  // Sum of publication budgets over [t-w+1, t-1]; absent entries count 0.
  double publication_spend_before(std::int64_t t) const;
  // Sum of both budget kinds over [t-w+1, t].
  double window_spent(std::int64_t t) const;

  bool has_publication() const { return has_publication_; }
  const EncodedVector& last_release() const { return last_release_; }
  std::int64_t last_publication_timestamp() const { return last_publication_t_; }
  double last_publication_budget() const { return last_publication_budget_; }

  void record(std::int64_t t, double eps_dis, double eps_pub);
  void note_publication(std::int64_t t, double eps_pub, EncodedVector release);

 private:
  struct Entry {
    std::int64_t t;
    double eps_dis;
    double eps_pub;
  };

  double epsilon_;
  int window_;
  std::deque<Entry> entries_;
  EncodedVector last_release_;
  bool has_publication_ = false;
  std::int64_t last_publication_t_ = -1;
  double last_publication_budget_ = 0.0;
  std::int64_t next_t_ = 0;
};

// Uniform split: always publish with eps/w.
SchedulerDecision lbu_step(WindowLedger& ledger, const EncodedVector& c_t,
                           std::int64_t t, const PerturbFn& perturb_fn);

// Whole budget at one sampling timestamp per block of w; the rest re-release.
// sampling_offset selects the position inside each block and must stay fixed
// for the whole stream so that no sliding window sees two sampled timestamps.
SchedulerDecision lsp_step(WindowLedger& ledger, const EncodedVector& c_t,
                           std::int64_t t, int sampling_offset,
                           const PerturbFn& perturb_fn);

// Budget distribution: fixed dissimilarity probe at eps/(2w), candidate at half
// the remaining publication budget, publish only when the probe's distance to
// the last release exceeds the candidate's own error.
SchedulerDecision lbd_step(WindowLedger& ledger, const EncodedVector& c_t,
                           std::int64_t t, const PerturbFn& perturb_fn,
                           DissimilarityForm form = DissimilarityForm::Squared);

// Budget absorption: publications absorb the uniform shares of skipped
// timestamps (capped at w) and nullify as many timestamps afterwards.
SchedulerDecision lba_step(WindowLedger& ledger, const EncodedVector& c_t,
                           std::int64_t t, const PerturbFn& perturb_fn,
                           DissimilarityForm form = DissimilarityForm::Squared);

SchedulerDecision scheduler_step(SchedulerKind kind, WindowLedger& ledger,
                                 const EncodedVector& c_t, std::int64_t t,
                                 const PerturbFn& perturb_fn, int lsp_sampling_offset = 0,
                                 DissimilarityForm form = DissimilarityForm::Squared);

}  // namespace ldpse
