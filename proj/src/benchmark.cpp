#include "ldpse/benchmark.hpp"

#include <cmath>

#include "ldpse/error.hpp"

namespace ldpse {

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "laplace") return NoiseKind::Laplace;
  if (name == "gaussian") return NoiseKind::Gaussian;
  if (name == "gamma") return NoiseKind::Gamma;
  if (name == "exponential_mech") return NoiseKind::ExponentialMech;
  throw ValidationError("unknown noise mechanism: " + name);
}

std::string noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Laplace: return "laplace";
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::Gamma: return "gamma";
    case NoiseKind::ExponentialMech: return "exponential_mech";
  }
  return "unknown";
}

double benchmark_noise(NoiseKind kind, double value, double epsilon,
                       double sensitivity, Rng& rng, const NoiseOptions& options) {
  require(epsilon > 0.0, "benchmark_noise: epsilon must be positive");
  require(sensitivity > 0.0, "benchmark_noise: sensitivity must be positive");
  const double scale = sensitivity / epsilon;
  switch (kind) {
    case NoiseKind::Laplace:
      return value + rng.laplace(scale);
    case NoiseKind::Gaussian: {
      require(options.delta > 0.0 && options.delta < 1.0,
              "benchmark_noise: delta must be in (0, 1)");
      const double sigma = std::sqrt(2.0 * std::log(1.25 / options.delta)) * scale;
      return value + sigma * rng.normal();
    }
    case NoiseKind::Gamma: {
      require(options.gamma_fraction > 0.0 && options.gamma_fraction <= 1.0,
              "benchmark_noise: gamma_fraction must be in (0, 1]");
      // Difference of gamma variates; summing 1/gamma_fraction of these
      // reconstructs Laplace noise at the same scale.
      return value + rng.gamma(options.gamma_fraction, scale) -
             rng.gamma(options.gamma_fraction, scale);
    }
    case NoiseKind::ExponentialMech: {
      require(!options.grid.empty(), "benchmark_noise: exponential mechanism needs a grid");
      // Utility is the negative distance; shift by the best utility before
      // exponentiating to keep the weights in range.
      double best = -std::fabs(value - options.grid.front());
      for (double g : options.grid) best = std::max(best, -std::fabs(value - g));
      double total = 0.0;
      std::vector<double> weights(options.grid.size());
      for (std::size_t i = 0; i < options.grid.size(); ++i) {
        const double u = -std::fabs(value - options.grid[i]);
        weights[i] = std::exp(epsilon * (u - best) / (2.0 * sensitivity));
        total += weights[i];
      }
      double draw = rng.uniform() * total;
      for (std::size_t i = 0; i < weights.size(); ++i) {
        draw -= weights[i];
        if (draw <= 0.0) return options.grid[i];
      }
      return options.grid.back();
    }
  }
  throw ValidationError("benchmark_noise: unknown mechanism");
}

}  // namespace ldpse
