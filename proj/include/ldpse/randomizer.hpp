#pragma once

#include "ldpse/quantizer.hpp"
#include "ldpse/rng.hpp"

namespace ldpse {

// Optimized unary encoding bit-flip probabilities for the combined vector.
// Keeping a 1 has probability p = 1/2; flipping a 0 to 1 has probability
// q = 1 / (1 + e^(eps/n)), where the exponent reflects the combined vector's
// sensitivity of two bits per appliance block.
struct PerturbationParams {
  double epsilon = 0.0;
  int appliance_count = 0;
  double p = 0.5;
  double q = 0.5;
};

PerturbationParams oue_probabilities(double epsilon, int appliance_count);

// Independent per-bit randomized response; deterministic given the generator.
EncodedVector perturb(const EncodedVector& vector, const PerturbationParams& params,
                      Rng& rng);

// Exhaustive privacy oracle: max over all 2^m outputs of Pr[B|b1] / Pr[B|b2].
// Only feasible for small m; used to verify the eps-LDP bound.
double likelihood_ratio_bound(const EncodedVector& b1, const EncodedVector& b2,
                              const PerturbationParams& params);

}  // namespace ldpse
