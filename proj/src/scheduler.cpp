#include "ldpse/scheduler.hpp"

#include <cmath>
#include <string>

#include "ldpse/error.hpp"

namespace ldpse {

double dissimilarity(const BitArray& a, const BitArray& b, DissimilarityForm form) {
  require(a.size() == b.size(), "dissimilarity: length mismatch");
  require(a.size() > 0, "dissimilarity: empty vectors");
  const Eigen::ArrayXd diff = a.cast<double>() - b.cast<double>();
  if (form == DissimilarityForm::Squared) return diff.square().mean();
  return diff.abs().mean();
}

WindowLedger::WindowLedger(double epsilon, int window_size, int appliance_count,
                           int level_count)
    : epsilon_(epsilon), window_(window_size) {
  require(epsilon > 0.0, "WindowLedger: epsilon must be positive");
  require(window_size >= 1, "WindowLedger: window size must be at least 1");
  require(appliance_count >= 1 && level_count >= 2, "WindowLedger: bad dimensions");
  last_release_.appliance_count = appliance_count;
  last_release_.level_count = level_count;
  last_release_.bits =
      BitArray::Zero(static_cast<Eigen::Index>(appliance_count) * level_count);
}

double WindowLedger::publication_spend_before(std::int64_t t) const {
  double sum = 0.0;
  for (const Entry& e : entries_) {
    if (e.t >= t - window_ + 1 && e.t <= t - 1) sum += e.eps_pub;
  }
  return sum;
}

double WindowLedger::window_spent(std::int64_t t) const {
  double sum = 0.0;
  for (const Entry& e : entries_) {
    if (e.t >= t - window_ + 1 && e.t <= t) sum += e.eps_dis + e.eps_pub;
  }
  return sum;
}

void WindowLedger::record(std::int64_t t, double eps_dis, double eps_pub) {
  require(t >= next_t_, "WindowLedger: timestamps must be strictly increasing");
  entries_.push_back(Entry{t, eps_dis, eps_pub});
  next_t_ = t + 1;
  while (!entries_.empty() && entries_.front().t < t - window_ + 1) {
    entries_.pop_front();
  }
}

void WindowLedger::note_publication(std::int64_t t, double eps_pub,
                                    EncodedVector release) {
  has_publication_ = true;
  last_publication_t_ = t;
  last_publication_budget_ = eps_pub;
  last_release_ = std::move(release);
}

SchedulerDecision lbu_step(WindowLedger& ledger, const EncodedVector& c_t,
                           std::int64_t t, const PerturbFn& perturb_fn) {
  const double budget = ledger.epsilon() / ledger.window();
  EncodedVector release = perturb_fn(c_t, budget, PerturbPurpose::Publication);
  ledger.record(t, 0.0, budget);
  ledger.note_publication(t, budget, release);
  return SchedulerDecision{Strategy::Publish, 0.0, budget, std::move(release)};
}

SchedulerDecision lsp_step(WindowLedger& ledger, const EncodedVector& c_t,
                           std::int64_t t, int sampling_offset,
                           const PerturbFn& perturb_fn) {
  const int w = ledger.window();
  require(sampling_offset >= 0 && sampling_offset < w,
          "lsp_step: sampling offset outside window");
  const bool sampling = (t % w + w) % w == sampling_offset;
  if (sampling) {
    const double budget = ledger.epsilon();
    EncodedVector release = perturb_fn(c_t, budget, PerturbPurpose::Publication);
    ledger.record(t, 0.0, budget);
    ledger.note_publication(t, budget, release);
    return SchedulerDecision{Strategy::Publish, 0.0, budget, std::move(release)};
  }
  ledger.record(t, 0.0, 0.0);
  return SchedulerDecision{Strategy::Approximate, 0.0, 0.0, ledger.last_release()};
}

SchedulerDecision lbd_step(WindowLedger& ledger, const EncodedVector& c_t,
                           std::int64_t t, const PerturbFn& perturb_fn,
                           DissimilarityForm form) {
  const double eps = ledger.epsilon();
  const double eps_dis = eps / (2.0 * ledger.window());

  const EncodedVector probe = perturb_fn(c_t, eps_dis, PerturbPurpose::Dissimilarity);
  const double dis = dissimilarity(probe.bits, ledger.last_release().bits, form);

  const double eps_remaining = eps / 2.0 - ledger.publication_spend_before(t);
  const double eps_pub = eps_remaining / 2.0;
  EncodedVector candidate = perturb_fn(c_t, eps_pub, PerturbPurpose::Publication);
  const double err = dissimilarity(candidate.bits, c_t.bits, form);

  // The very first timestamp has no meaningful reference, so it always publishes.
  const bool publish = !ledger.has_publication() || dis > err;
  if (publish) {
    ledger.record(t, eps_dis, eps_pub);
    ledger.note_publication(t, eps_pub, candidate);
    return SchedulerDecision{Strategy::Publish, eps_dis, eps_pub, std::move(candidate)};
  }
  ledger.record(t, eps_dis, 0.0);
  return SchedulerDecision{Strategy::Approximate, eps_dis, 0.0, ledger.last_release()};
}

SchedulerDecision lba_step(WindowLedger& ledger, const EncodedVector& c_t,
                           std::int64_t t, const PerturbFn& perturb_fn,
                           DissimilarityForm form) {
  const double eps = ledger.epsilon();
  const int w = ledger.window();
  const double share = eps / (2.0 * w);

  const EncodedVector probe = perturb_fn(c_t, share, PerturbPurpose::Dissimilarity);
  const double dis = dissimilarity(probe.bits, ledger.last_release().bits, form);

  std::int64_t absorbable = 1;
  if (ledger.has_publication()) {
    const std::int64_t nullified =
        std::llround(ledger.last_publication_budget() / share) - 1;
    const std::int64_t since = t - ledger.last_publication_timestamp();
    if (since <= nullified) {
      // Inside the nullified stretch: forced approximation, no candidate drawn.
      ledger.record(t, share, 0.0);
      return SchedulerDecision{Strategy::Approximate, share, 0.0,
                               ledger.last_release()};
    }
    absorbable = since - nullified;
  }

  const double eps_pub =
      share * static_cast<double>(std::min<std::int64_t>(absorbable, w));
  EncodedVector candidate = perturb_fn(c_t, eps_pub, PerturbPurpose::Publication);
  const double err = dissimilarity(candidate.bits, c_t.bits, form);

  const bool publish = !ledger.has_publication() || dis > err;
  if (publish) {
    ledger.record(t, share, eps_pub);
    ledger.note_publication(t, eps_pub, candidate);
    return SchedulerDecision{Strategy::Publish, share, eps_pub, std::move(candidate)};
  }
  ledger.record(t, share, 0.0);
  return SchedulerDecision{Strategy::Approximate, share, 0.0, ledger.last_release()};
}

SchedulerDecision scheduler_step(SchedulerKind kind, WindowLedger& ledger,
                                 const EncodedVector& c_t, std::int64_t t,
                                 const PerturbFn& perturb_fn, int lsp_sampling_offset,
                                 DissimilarityForm form) {
  switch (kind) {
    case SchedulerKind::LBU:
      return lbu_step(ledger, c_t, t, perturb_fn);
    case SchedulerKind::LSP:
      return lsp_step(ledger, c_t, t, lsp_sampling_offset, perturb_fn);
    case SchedulerKind::LBD:
      return lbd_step(ledger, c_t, t, perturb_fn, form);
    case SchedulerKind::LBA:
      return lba_step(ledger, c_t, t, perturb_fn, form);
  }
  throw ValidationError("scheduler_step: unknown scheduler kind");
}

}  // namespace ldpse
