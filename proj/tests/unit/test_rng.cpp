#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "ldpse/rng.hpp"

using ldpse::Rng;

TEST_CASE("streams are reproducible and keyed") {
  Rng a = Rng::stream(42, 7, 3, 1);
  Rng b = Rng::stream(42, 7, 3, 1);
  Rng c = Rng::stream(42, 7, 3, 2);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t va = a.next_u64();
    CHECK(va == b.next_u64());
    CHECK(va != c.next_u64());
  }
}

TEST_CASE("uniform stays in [0,1) with the right mean") {
  Rng rng(123);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // std of the mean is 1/sqrt(12 n) ~ 0.0009
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal moments") {
  Rng rng(7);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  CHECK(std::fabs(sum / n) < 0.01);
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("laplace is centred with mean absolute deviation = scale") {
  Rng rng(9);
  const double scale = 3.5;
  double sum = 0.0, abs_sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.laplace(scale);
    sum += x;
    abs_sum += std::fabs(x);
  }
  CHECK(std::fabs(sum / n) < 0.05);
  CHECK(abs_sum / n == doctest::Approx(scale).epsilon(0.02));
}

TEST_CASE("exponential mean equals scale") {
  Rng rng(11);
  const double scale = 2.25;
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += rng.exponential(scale);
  CHECK(sum / n == doctest::Approx(scale).epsilon(0.02));
}

TEST_CASE("gamma mean and variance match shape*scale") {
  const int n = 200000;
  for (double shape : {0.5, 1.0, 3.0}) {
    Rng rng(1000 + static_cast<std::uint64_t>(shape * 10));
    const double scale = 2.0;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = rng.gamma(shape, scale);
      REQUIRE(x >= 0.0);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(mean == doctest::Approx(shape * scale).epsilon(0.03));
    CHECK(var == doctest::Approx(shape * scale * scale).epsilon(0.08));
  }
}

TEST_CASE("uniform_index covers the range") {
  Rng rng(5);
  bool seen[7] = {};
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t v = rng.uniform_index(7);
    REQUIRE(v < 7);
    seen[v] = true;
  }
  for (bool s : seen) CHECK(s);
}
