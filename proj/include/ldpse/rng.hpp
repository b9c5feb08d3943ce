#pragma once

#include <cstdint>

namespace ldpse {

// Deterministic splittable generator (splitmix64 core). Streams are derived by
// hashing a (master seed, user, timestamp, purpose) key, so every user/timestamp
// pair owns an independent stream regardless of execution order. All sampling is
// done from explicit bit-level constructions rather than std:: distributions to
// keep byte-identical output across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent stream keyed by up to four components.
  static Rng stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                    std::uint64_t c = 0);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  bool bernoulli(double p);
  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  double normal();                    // standard normal, polar Box-Muller
  double laplace(double scale);       // mean 0
  double exponential(double scale);   // mean = scale
  double gamma(double shape, double scale);

 private:
  std::uint64_t state_;
};

}  // namespace ldpse
