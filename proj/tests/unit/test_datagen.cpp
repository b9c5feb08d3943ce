#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ldpse/datagen.hpp"
#include "ldpse/error.hpp"

using namespace ldpse;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/ldpse_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("uniform synthetic values have the right mean and range") {
  // 100 users x 10 appliances x 1000 days = 1e6 draws
  const Dataset data = gen_synthetic(Distribution::Uniform, 100, 10, 1000, 5);
  REQUIRE(data.rows.size() == 1000000);
  double sum = 0.0;
  for (const DatasetRow& row : data.rows) {
    REQUIRE(row.watts >= 0.0);
    REQUIRE(row.watts <= 3000.0);
    sum += row.watts;
  }
  CHECK(std::fabs(sum / 1e6 - 1500.0) < 5.0);
}

TEST_CASE("all synthetic families stay inside the range") {
  for (Distribution dist : {Distribution::Uniform, Distribution::Normal,
                            Distribution::SkewLeft, Distribution::SkewRight}) {
    const Dataset data = gen_synthetic(dist, 50, 5, 40, 9);
    for (const DatasetRow& row : data.rows) {
      REQUIRE(row.watts >= 0.0);
      REQUIRE(row.watts <= 3000.0);
    }
  }
}

TEST_CASE("skewed families lean the expected way") {
  const Dataset right = gen_synthetic(Distribution::SkewRight, 100, 5, 200, 3);
  const Dataset left = gen_synthetic(Distribution::SkewLeft, 100, 5, 200, 3);
  double right_mean = 0.0, left_mean = 0.0;
  for (const DatasetRow& row : right.rows) right_mean += row.watts;
  for (const DatasetRow& row : left.rows) left_mean += row.watts;
  right_mean /= right.rows.size();
  left_mean /= left.rows.size();
  CHECK(right_mean < 1500.0);  // mass near zero
  CHECK(left_mean > 1500.0);   // reflected
}

TEST_CASE("synthetic generation is seed-deterministic") {
  const Dataset a = gen_synthetic(Distribution::Normal, 20, 4, 10, 77);
  const Dataset b = gen_synthetic(Distribution::Normal, 20, 4, 10, 77);
  const Dataset c = gen_synthetic(Distribution::Normal, 20, 4, 10, 78);
  REQUIRE(a.rows.size() == b.rows.size());
  bool all_equal_c = true;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].watts == b.rows[i].watts);
    if (a.rows[i].watts != c.rows[i].watts) all_equal_c = false;
  }
  CHECK(!all_equal_c);
}

TEST_CASE("distribution names parse") {
  CHECK(parse_distribution("uniform") == Distribution::Uniform);
  CHECK(parse_distribution("skew_left") == Distribution::SkewLeft);
  CHECK_THROWS_AS(parse_distribution("cauchy"), ValidationError);
}

TEST_CASE("derive_stats uses the population convention") {
  Dataset data;
  data.user_count = 1;
  data.appliance_count = 2;
  data.day_count = 2;
  data.rows = {
      {1, 0, 1, 100.0}, {1, 1, 1, 100.0},  // constant appliance
      {1, 0, 2, 0.0},   {1, 1, 2, 200.0},  // two-point appliance
  };
  const ApplianceStats stats = derive_stats(data);
  REQUIRE(stats.archetype_count() == 1);
  CHECK(stats.mean(0, 0) == doctest::Approx(100.0));
  CHECK(stats.stddev(0, 0) == doctest::Approx(0.0));
  CHECK(stats.lower(0, 0) == 100.0);
  CHECK(stats.upper(0, 0) == 100.0);
  CHECK(stats.mean(0, 1) == doctest::Approx(100.0));
  CHECK(stats.stddev(0, 1) == doctest::Approx(100.0));

  Dataset missing = data;
  missing.rows.pop_back();
  missing.rows.pop_back();  // appliance 2 has no rows left
  CHECK_THROWS_AS(derive_stats(missing), ValidationError);
}

TEST_CASE("augment with zero stddev reproduces archetype means") {
  Dataset seed_data;
  seed_data.user_count = 2;
  seed_data.appliance_count = 1;
  seed_data.day_count = 1;
  seed_data.rows = {{1, 0, 1, 120.0}, {2, 0, 1, 300.0}};
  const ApplianceStats stats = derive_stats(seed_data);
  const Dataset out = augment(stats, 2, 3, 99);
  REQUIRE(out.rows.size() == 6);
  for (const DatasetRow& row : out.rows) {
    const double expected = (row.user_id - 1) % 2 == 0 ? 120.0 : 300.0;
    CHECK(row.watts == doctest::Approx(expected));
  }
  CHECK_THROWS_AS(augment(stats, 1, 3, 99), ValidationError);
}

TEST_CASE("augment preserves per-appliance means within tolerance") {
  const Dataset panel = gen_household_seed(39, 15, 30, 4242);
  const ApplianceStats stats = derive_stats(panel);
  const Dataset big = augment(stats, 1000, 30, 777);
  REQUIRE(big.rows.size() == static_cast<std::size_t>(1000) * 30 * 15);

  Eigen::ArrayXd archetype_mean = Eigen::ArrayXd::Zero(15);
  for (Eigen::Index arch = 0; arch < stats.archetype_count(); ++arch) {
    archetype_mean += stats.mean.row(arch).transpose();
  }
  archetype_mean /= static_cast<double>(stats.archetype_count());

  Eigen::ArrayXd synthetic_mean = Eigen::ArrayXd::Zero(15);
  for (const DatasetRow& row : big.rows) synthetic_mean(row.appliance_id - 1) += row.watts;
  synthetic_mean /= static_cast<double>(1000 * 30);

  for (int a = 0; a < 15; ++a) {
    CHECK(std::fabs(synthetic_mean(a) - archetype_mean(a)) <
          0.05 * archetype_mean(a));
  }

  const Dataset again = augment(stats, 1000, 30, 777);
  CHECK(again.rows.size() == big.rows.size());
  CHECK(again.rows[12345].watts == big.rows[12345].watts);
}

TEST_CASE("household ladder is descending and in range") {
  const Eigen::ArrayXd ladder = household_base_means(15, 3000.0);
  for (int i = 0; i < 15; ++i) {
    CHECK(ladder(i) > 0.0);
    CHECK(ladder(i) < 3000.0);
    if (i > 0) CHECK(ladder(i) < ladder(i - 1));
  }
}

TEST_CASE("csv round trip and validation") {
  TempFile file("roundtrip.csv");
  const Dataset data = gen_synthetic(Distribution::Uniform, 5, 3, 4, 11);
  write_csv(data, file.path);
  const Dataset back = ingest_csv(file.path);
  REQUIRE(back.rows.size() == data.rows.size());
  CHECK(back.user_count == 5);
  CHECK(back.appliance_count == 3);
  CHECK(back.day_count == 4);
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    CHECK(back.rows[i].user_id == data.rows[i].user_id);
    CHECK(back.rows[i].watts == doctest::Approx(data.rows[i].watts));
  }
}

TEST_CASE("csv ingestion reports the offending line") {
  TempFile file("bad_watts.csv");
  {
    std::ofstream out(file.path);
    out << "user_id,day,appliance_id,watts\n";
    out << "1,0,1,100\n";
    out << "1,0,2,-5\n";
  }
  try {
    ingest_csv(file.path);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("csv ingestion requires the header") {
  TempFile file("no_header.csv");
  {
    std::ofstream out(file.path);
    out << "1,0,1,100\n";
  }
  CHECK_THROWS_AS(ingest_csv(file.path), ValidationError);
  CHECK_THROWS_AS(ingest_csv("/nonexistent/definitely_missing.csv"), ValidationError);
}

TEST_CASE("group_rows_by_user splits into streams") {
  Dataset data;
  data.user_count = 2;
  data.appliance_count = 2;
  data.day_count = 2;
  data.rows = {
      {2, 1, 1, 4.0}, {1, 0, 1, 1.0}, {1, 0, 2, 2.0}, {1, 1, 1, 3.0}, {2, 0, 2, 5.0},
  };
  const std::vector<UserRows> grouped = group_rows_by_user(data);
  REQUIRE(grouped.size() == 2);
  CHECK(grouped[0].user_id == 1);
  REQUIRE(grouped[0].days.size() == 2);
  CHECK(grouped[0].days[0].readings.size() == 2);
  CHECK(grouped[1].user_id == 2);
  CHECK(grouped[1].days[0].day == 0);
  CHECK(grouped[1].days[1].day == 1);
}
