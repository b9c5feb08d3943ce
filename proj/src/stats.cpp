#include "ldpse/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include "ldpse/error.hpp"

namespace ldpse {

KWResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  require(groups.size() >= 2, "kruskal_wallis: need at least two groups");
  std::size_t total = 0;
  for (const auto& g : groups) {
    require(!g.empty(), "kruskal_wallis: empty group");
    total += g.size();
  }

  struct Obs {
    double value;
    int group;
  };
  std::vector<Obs> obs;
  obs.reserve(total);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (double v : groups[g]) obs.push_back(Obs{v, static_cast<int>(g)});
  }
  std::sort(obs.begin(), obs.end(),
            [](const Obs& a, const Obs& b) { return a.value < b.value; });

  const double n = static_cast<double>(total);
  std::vector<double> rank_sum(groups.size(), 0.0);
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < obs.size()) {
    std::size_t j = i;
    while (j < obs.size() && obs[j].value == obs[i].value) ++j;
    const double t = static_cast<double>(j - i);
    const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) {
      rank_sum[static_cast<std::size_t>(obs[k].group)] += avg_rank;
    }
    tie_term += t * t * t - t;
    i = j;
  }

  const double correction = 1.0 - tie_term / (n * n * n - n);
  require(correction > 0.0,
          "kruskal_wallis: all observations identical (degenerate input)");

  double h = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double ng = static_cast<double>(groups[g].size());
    h += rank_sum[g] * rank_sum[g] / ng;
  }
  h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);
  h /= correction;

  KWResult result;
  result.h = std::max(h, 0.0);
  result.degrees_of_freedom = static_cast<int>(groups.size()) - 1;
  result.tie_corrected = tie_term > 0.0;
  result.p_value = chi_squared_survival(result.h, result.degrees_of_freedom);
  return result;
}

double regularized_gamma_p_series(double a, double x) {
  require(a > 0.0 && x >= 0.0, "regularized_gamma_p_series: bad arguments");
  if (x == 0.0) return 0.0;
  double term = 1.0 / a;
  double sum = term;
  double denom = a;
  for (int k = 0; k < 2000; ++k) {
    denom += 1.0;
    term *= x / denom;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

namespace {

// Modified Lentz evaluation of the upper-gamma continued fraction; accurate
// for x >= a + 1.
double upper_gamma_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / (std::fabs(b) >= tiny ? b : tiny);
  double f = d;
  for (int k = 1; k <= 3000; ++k) {
    const double an = -static_cast<double>(k) * (static_cast<double>(k) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::fabs(delta - 1.0) < 3e-16) break;
  }
  return f * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lower-gamma continued fraction (the convergent companion for x < a + 1);
// partial numerators alternate between -(a+k-1)x and kx.
double lower_gamma_cf_p(double a, double x) {
  const double tiny = 1e-300;
  double f = tiny;
  double c = f;
  double d = 0.0;
  for (int j = 1; j <= 3000; ++j) {
    double aj, bj;
    if (j == 1) {
      aj = 1.0;
      bj = a;
    } else if (j % 2 == 0) {
      const double k = j / 2;
      aj = -(a + k - 1.0) * x;
      bj = a + 2.0 * k - 1.0;
    } else {
      const double k = (j - 1) / 2;
      aj = k * x;
      bj = a + 2.0 * k;
    }
    d = bj + aj * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = bj + aj / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (j > 3 && std::fabs(delta - 1.0) < 3e-16) break;
  }
  return f * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_q_contfrac(double a, double x) {
  require(a > 0.0 && x > 0.0, "regularized_gamma_q_contfrac: bad arguments");
  // Each region gets the fraction that converges there.
  if (x < a + 1.0) return 1.0 - lower_gamma_cf_p(a, x);
  return upper_gamma_cf(a, x);
}

double chi_squared_survival(double x, int degrees_of_freedom) {
  require(degrees_of_freedom >= 1, "chi_squared_survival: df must be positive");
  require(x >= 0.0, "chi_squared_survival: negative statistic");
  if (x == 0.0) return 1.0;
  const double a = 0.5 * static_cast<double>(degrees_of_freedom);
  const double half = 0.5 * x;
  if (half < a + 1.0) return 1.0 - regularized_gamma_p_series(a, half);
  return regularized_gamma_q_contfrac(a, half);
}

SimilarityReport similarity_report(
    const std::vector<Eigen::ArrayXXd>& true_level_counts,
    const std::vector<EstimatedHistogram>& estimated,
    const QuantizationScheme& scheme) {
  require(!true_level_counts.empty(), "similarity_report: no true histograms");
  require(true_level_counts.size() == estimated.size(),
          "similarity_report: true and estimated spans differ");
  const Eigen::Index n = true_level_counts.front().rows();
  const int d = scheme.level_count();

  SimilarityReport report;
  report.p_values = Eigen::ArrayXd::Constant(n, std::numeric_limits<double>::quiet_NaN());

  double p_sum = 0.0;
  int p_count = 0;
  for (Eigen::Index a = 0; a < n; ++a) {
    std::vector<double> truth;
    std::vector<double> est;
    for (std::size_t t = 0; t < estimated.size(); ++t) {
      require(true_level_counts[t].rows() == n && true_level_counts[t].cols() == d &&
                  estimated[t].counts.rows() == n && estimated[t].counts.cols() == d,
              "similarity_report: histogram dimensions mismatch");
      for (int level = 0; level < d; ++level) {
        const auto true_count =
            static_cast<std::int64_t>(std::llround(true_level_counts[t](a, level)));
        const auto est_count = static_cast<std::int64_t>(
            std::llround(std::max(estimated[t].counts(a, level), 0.0)));
        truth.insert(truth.end(), static_cast<std::size_t>(true_count),
                     static_cast<double>(level + 1));
        est.insert(est.end(), static_cast<std::size_t>(est_count),
                   static_cast<double>(level + 1));
      }
    }
    if (truth.empty() || est.empty()) {
      ++report.degenerate_count;
      continue;
    }
    try {
      const KWResult kw = kruskal_wallis({truth, est});
      report.p_values(a) = kw.p_value;
      p_sum += kw.p_value;
      ++p_count;
      if (kw.p_value > 0.05) ++report.appliances_above_threshold;
    } catch (const ValidationError&) {
      ++report.degenerate_count;  // all observations tied
    }
  }
  report.mean_p = p_count > 0 ? p_sum / p_count : std::numeric_limits<double>::quiet_NaN();
  if (report.degenerate_count > 0) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true)) {
      std::cerr << "ldpse: warning: degenerate appliance distributions excluded "
                   "from similarity means (reported per result)\n";
    }
  }
  return report;
}

}  // namespace ldpse
