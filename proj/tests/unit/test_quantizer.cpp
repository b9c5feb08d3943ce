#include <doctest.h>

#include "ldpse/error.hpp"
#include "ldpse/quantizer.hpp"
#include "ldpse/rng.hpp"

using namespace ldpse;

TEST_CASE("equal-width scheme boundaries") {
  const QuantizationScheme s = build_scheme(10, 3000.0);
  REQUIRE(s.boundaries.size() == 11);
  for (int i = 0; i <= 10; ++i) CHECK(s.boundaries(i) == doctest::Approx(300.0 * i));

  const QuantizationScheme s5 = build_scheme(5, 3000.0);
  REQUIRE(s5.boundaries.size() == 6);
  for (int i = 0; i <= 5; ++i) CHECK(s5.boundaries(i) == doctest::Approx(600.0 * i));
}

TEST_CASE("scheme validation") {
  CHECK_THROWS_AS(build_scheme(1, 3000.0), ValidationError);
  CHECK_THROWS_AS(build_scheme(10, 0.0), ValidationError);
  CHECK_THROWS_AS(build_scheme(10, -5.0), ValidationError);

  Eigen::ArrayXd bad(4);
  bad << 0, 10, 10, 30;  // non-increasing step
  CHECK_THROWS_AS(build_scheme(3, 30.0, bad), ValidationError);
  Eigen::ArrayXd not_zero(3);
  not_zero << 1, 10, 30;
  CHECK_THROWS_AS(build_scheme(2, 30.0, not_zero), ValidationError);

  Eigen::ArrayXd custom(4);
  custom << 0, 100, 500, 3000;
  const QuantizationScheme s = build_scheme(3, 3000.0, custom);
  CHECK(s.level_count() == 3);
  CHECK(s.level_midpoint(2) == doctest::Approx(300.0));
}

TEST_CASE("map_reading picks the half-open range") {
  const QuantizationScheme s = build_scheme(10, 3000.0);
  CHECK(map_reading(450.0, s) == 2);
  CHECK(map_reading(0.0, s) == 1);
  CHECK(map_reading(3000.0, s) == 10);
  CHECK(map_reading(300.0, s) == 1);   // boundary belongs to the lower level
  CHECK(map_reading(300.0001, s) == 2);
  CHECK(map_reading(5000.0, s) == 10);  // clamps above max
  CHECK_THROWS_AS(map_reading(-1.0, s), ValidationError);
}

TEST_CASE("partition property over random values") {
  const QuantizationScheme s = build_scheme(10, 3000.0);
  Rng rng(77);
  for (int i = 0; i < 100000; ++i) {
    const double v = rng.uniform() * 3000.0;
    const int level = map_reading(v, s);
    REQUIRE(level >= 1);
    REQUIRE(level <= 10);
    if (v > 0.0) {
      REQUIRE(v > s.boundaries(level - 1));
      REQUIRE(v <= s.boundaries(level));
    }
  }
  // Both sides of every interior boundary.
  for (int l = 1; l < 10; ++l) {
    CHECK(map_reading(s.boundaries(l), s) == l);
    CHECK(map_reading(s.boundaries(l) + 1e-9, s) == l + 1);
  }
}

TEST_CASE("encode_level puts level 1 in the rightmost position") {
  const BitArray one = encode_level(1, 10);
  for (int i = 0; i < 9; ++i) CHECK(one(i) == 0);
  CHECK(one(9) == 1);

  const BitArray two = encode_level(2, 10);
  CHECK(two(8) == 1);
  CHECK(two.cast<int>().sum() == 1);

  const BitArray top = encode_level(3, 3);
  CHECK(top(0) == 1);
  CHECK(top(1) == 0);
  CHECK(top(2) == 0);

  CHECK_THROWS_AS(encode_level(0, 10), ValidationError);
  CHECK_THROWS_AS(encode_level(11, 10), ValidationError);
}

TEST_CASE("encode/decode round trip") {
  for (int d : {2, 3, 10, 16}) {
    for (int level = 1; level <= d; ++level) {
      CHECK(decode_block(encode_level(level, d)) == level);
    }
  }
}

TEST_CASE("combined vector layout and absent appliances") {
  const QuantizationScheme s = build_scheme(3, 30.0);
  // a1 -> level 1, a2 -> level 2
  {
    const EncodedVector v =
        build_combined_vector({{1, 5.0}, {2, 15.0}}, s, 2);
    REQUIRE(v.bits.size() == 6);
    const std::uint8_t expected[6] = {0, 0, 1, 0, 1, 0};
    for (int i = 0; i < 6; ++i) CHECK(v.bits(i) == expected[i]);
  }
  // only a1 -> level 3; a2 reported off (level 1)
  {
    const EncodedVector v = build_combined_vector({{1, 25.0}}, s, 2);
    const std::uint8_t expected[6] = {1, 0, 0, 0, 0, 1};
    for (int i = 0; i < 6; ++i) CHECK(v.bits(i) == expected[i]);
  }
  CHECK_THROWS_AS(build_combined_vector({{3, 1.0}}, s, 2), ValidationError);
  CHECK_THROWS_AS(build_combined_vector({{1, 1.0}, {1, 2.0}}, s, 2), ValidationError);
}

TEST_CASE("combined vector always has one 1 per appliance block") {
  const QuantizationScheme s = build_scheme(7, 3000.0);
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<ApplianceReading> readings;
    const int n = 9;
    for (int a = 1; a <= n; ++a) {
      if (rng.bernoulli(0.7)) readings.push_back({a, rng.uniform() * 3000.0});
    }
    const EncodedVector v = build_combined_vector(readings, s, n);
    REQUIRE(v.bits.size() == 7 * n);
    for (int a = 0; a < n; ++a) {
      int ones = 0;
      for (int j = 0; j < 7; ++j) ones += v.bits(a * 7 + j);
      CHECK(ones == 1);
    }
  }
}
