#pragma once

#include <string>
#include <vector>

#include "ldpse/datagen.hpp"
#include "ldpse/rng.hpp"

namespace ldpse {

enum class NoiseKind { Laplace, Gaussian, Gamma, ExponentialMech };
NoiseKind parse_noise_kind(const std::string& name);
std::string noise_kind_name(NoiseKind kind);

struct NoiseOptions {
  double delta = 1e-5;          // Gaussian mechanism failure probability
  double gamma_fraction = 1.0;  // shape 1/k so that k contributions sum to Laplace
  std::vector<double> grid;     // exponential mechanism candidate outputs
};

// Per-reading baseline mechanisms. The additive kinds return value + noise;
// the exponential mechanism selects a grid candidate with probability
// proportional to exp(eps * u / (2 * sensitivity)), u = -|value - candidate|.
double benchmark_noise(NoiseKind kind, double value, double epsilon,
                       double sensitivity, Rng& rng, const NoiseOptions& options = {});

}  // namespace ldpse
