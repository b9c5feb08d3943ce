#include "ldpse/randomizer.hpp"

#include <cmath>
#include <string>

#include "ldpse/error.hpp"

namespace ldpse {

PerturbationParams oue_probabilities(double epsilon, int appliance_count) {
  require(appliance_count >= 1, "oue_probabilities: appliance count must be positive");
  require(epsilon >= 0.0, "oue_probabilities: negative epsilon");
  PerturbationParams params;
  params.epsilon = epsilon;
  params.appliance_count = appliance_count;
  params.p = 0.5;
  params.q = 1.0 / (1.0 + std::exp(epsilon / appliance_count));
  return params;
}

EncodedVector perturb(const EncodedVector& vector, const PerturbationParams& params,
                      Rng& rng) {
  require(vector.appliance_count == params.appliance_count,
          "perturb: appliance count mismatch between vector and params");
  require(vector.bits.size() ==
              static_cast<Eigen::Index>(vector.appliance_count) * vector.level_count,
          "perturb: vector length does not match d*n");
  EncodedVector out = vector;
  for (Eigen::Index i = 0; i < out.bits.size(); ++i) {
    const double keep = vector.bits(i) ? params.p : params.q;
    out.bits(i) = rng.bernoulli(keep) ? 1 : 0;
  }
  return out;
}

double likelihood_ratio_bound(const EncodedVector& b1, const EncodedVector& b2,
                              const PerturbationParams& params) {
  require(b1.bits.size() == b2.bits.size(), "likelihood_ratio_bound: length mismatch");
  const Eigen::Index m = b1.bits.size();
  require(m <= 16, "likelihood_ratio_bound: vector too long for exhaustive enumeration");

  const double p = params.p;
  const double q = params.q;
  double best = 0.0;
  for (std::uint64_t output = 0; output < (1ULL << m); ++output) {
    double pr1 = 1.0;
    double pr2 = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const bool out_bit = (output >> i) & 1;
      const double one1 = b1.bits(i) ? p : q;
      const double one2 = b2.bits(i) ? p : q;
      pr1 *= out_bit ? one1 : 1.0 - one1;
      pr2 *= out_bit ? one2 : 1.0 - one2;
    }
    best = std::max(best, pr1 / pr2);
  }
  return best;
}

}  // namespace ldpse
