#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ldpse/error.hpp"
#include "ldpse/rng.hpp"
#include "ldpse/stats.hpp"

using namespace ldpse;

namespace {

struct KWCase {
  std::vector<std::vector<double>> groups;
  double h;
  double p;
};

std::vector<KWCase> load_reference_cases() {
  std::ifstream in(std::string(LDPSE_TEST_DATA_DIR) + "/kw_reference.csv");
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);  // header
  std::vector<KWCase> cases;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string id, sizes_txt, values_txt, h_txt, p_txt;
    std::getline(fields, id, ',');
    std::getline(fields, sizes_txt, ',');
    std::getline(fields, values_txt, ',');
    std::getline(fields, h_txt, ',');
    std::getline(fields, p_txt, ',');
    KWCase c;
    c.h = std::stod(h_txt);
    c.p = std::stod(p_txt);
    std::vector<int> sizes;
    {
      std::istringstream s(sizes_txt);
      std::string tok;
      while (std::getline(s, tok, ';')) sizes.push_back(std::stoi(tok));
    }
    std::vector<double> values;
    {
      std::istringstream s(values_txt);
      std::string tok;
      while (std::getline(s, tok, ';')) values.push_back(std::stod(tok));
    }
    std::size_t offset = 0;
    for (int size : sizes) {
      c.groups.emplace_back(values.begin() + offset, values.begin() + offset + size);
      offset += static_cast<std::size_t>(size);
    }
    REQUIRE(offset == values.size());
    cases.push_back(std::move(c));
  }
  REQUIRE(cases.size() == 100);
  return cases;
}

}  // namespace

TEST_CASE("hand-ranked two-group case") {
  const KWResult r = kruskal_wallis({{1, 2, 3}, {4, 5, 6}});
  CHECK(std::fabs(r.h - 3.857142857142857) < 1e-9);
  CHECK(std::fabs(r.p_value - 0.049534613435627) < 1e-9);
  CHECK(r.degrees_of_freedom == 1);
  CHECK(!r.tie_corrected);
}

TEST_CASE("reference implementation agreement on 100 randomized cases") {
  for (const KWCase& c : load_reference_cases()) {
    const KWResult r = kruskal_wallis(c.groups);
    CHECK(std::fabs(r.h - c.h) < 1e-6);
    CHECK(std::fabs(r.p_value - c.p) < 1e-6);
  }
}

TEST_CASE("degenerate and malformed inputs are rejected") {
  CHECK_THROWS_AS(kruskal_wallis({{1, 1, 1}, {1, 1}}), ValidationError);
  CHECK_THROWS_AS(kruskal_wallis({{1, 2, 3}}), ValidationError);
  CHECK_THROWS_AS(kruskal_wallis({{1, 2}, {}}), ValidationError);
}

TEST_CASE("null distribution keeps p above 0.05 about 95 percent of the time") {
  int above = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::stream(888, static_cast<std::uint64_t>(trial));
    std::vector<double> a(100), b(100);
    for (double& x : a) x = rng.normal();
    for (double& x : b) x = rng.normal();
    if (kruskal_wallis({a, b}).p_value > 0.05) ++above;
  }
  CHECK(above >= 930);
  CHECK(above <= 975);
}

TEST_CASE("chi-squared survival function properties") {
  CHECK(chi_squared_survival(0.0, 3) == 1.0);
  CHECK_THROWS_AS(chi_squared_survival(-1.0, 3), ValidationError);
  CHECK_THROWS_AS(chi_squared_survival(1.0, 0), ValidationError);

  for (int df : {1, 2, 5, 10, 20}) {
    double previous = 1.0;
    for (double x = 0.25; x <= 50.0; x += 0.25) {
      const double p = chi_squared_survival(x, df);
      CHECK(p < previous);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      previous = p;
    }
  }
}

TEST_CASE("series and continued-fraction routes agree") {
  for (int df = 1; df <= 20; ++df) {
    const double a = 0.5 * df;
    for (double x = 0.5; x <= 50.0; x += 0.5) {
      const double half = 0.5 * x;
      const double via_series = 1.0 - regularized_gamma_p_series(a, half);
      const double via_cf = regularized_gamma_q_contfrac(a, half);
      CHECK(std::fabs(via_series - via_cf) < 1e-10);
    }
  }
}

TEST_CASE("similarity report is 1 for identical histograms") {
  const QuantizationScheme scheme = build_scheme(4, 400.0);
  Eigen::ArrayXXd counts = Eigen::ArrayXXd::Zero(2, 4);
  counts << 30, 20, 10, 5, 12, 0, 40, 8;
  EstimatedHistogram est;
  est.timestamp = 0;
  est.user_count = 65;
  est.counts = counts;
  const SimilarityReport report = similarity_report({counts}, {est}, scheme);
  CHECK(report.degenerate_count == 0);
  CHECK(report.p_values(0) == doctest::Approx(1.0));
  CHECK(report.p_values(1) == doctest::Approx(1.0));
  CHECK(report.appliances_above_threshold == 2);
}

TEST_CASE("similarity report flags unrelated histograms") {
  const QuantizationScheme scheme = build_scheme(4, 400.0);
  Eigen::ArrayXXd truth = Eigen::ArrayXXd::Zero(1, 4);
  truth << 500, 20, 5, 0;
  Eigen::ArrayXXd other = Eigen::ArrayXXd::Zero(1, 4);
  other << 5, 30, 300, 200;
  EstimatedHistogram est;
  est.timestamp = 0;
  est.user_count = 535;
  est.counts = other;
  const SimilarityReport report = similarity_report({truth}, {est}, scheme);
  CHECK(report.mean_p < 0.05);
}

TEST_CASE("similarity report marks degenerate appliances") {
  const QuantizationScheme scheme = build_scheme(3, 300.0);
  // Appliance 0: everything at level 1 on both sides -> all ranks tie.
  Eigen::ArrayXXd truth = Eigen::ArrayXXd::Zero(2, 3);
  truth << 50, 0, 0, 10, 20, 30;
  Eigen::ArrayXXd est_counts = Eigen::ArrayXXd::Zero(2, 3);
  est_counts << 45, 0, 0, 12, 18, 31;
  EstimatedHistogram est;
  est.timestamp = 0;
  est.user_count = 60;
  est.counts = est_counts;
  const SimilarityReport report = similarity_report({truth}, {est}, scheme);
  CHECK(report.degenerate_count == 1);
  CHECK(std::isnan(report.p_values(0)));
  CHECK(!std::isnan(report.p_values(1)));
}
