#pragma once

#include <vector>

#include "ldpse/aggregator.hpp"
#include "ldpse/datagen.hpp"

namespace ldpse {

struct KWResult {
  double h = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
  bool tie_corrected = false;
};

// Rank-based test that the groups share one distribution. H carries the tie
// correction; p comes from the chi-squared survival function with
// (groups - 1) degrees of freedom. Inputs where every observation is equal are
// rejected (the tie correction degenerates).
KWResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

// Upper tail of the chi-squared distribution via the regularized incomplete
// gamma function. The two evaluation routes are exposed separately so they can
// be cross-checked; chi_squared_survival picks the faster-converging one.
double regularized_gamma_p_series(double a, double x);
double regularized_gamma_q_contfrac(double a, double x);
double chi_squared_survival(double x, int degrees_of_freedom);

struct SimilarityReport {
  Eigen::ArrayXd p_values;             // per appliance; NaN marks degenerate input
  double mean_p = 0.0;                 // over non-degenerate appliances
  int appliances_above_threshold = 0;  // p > 0.05
  int degenerate_count = 0;
};

// Kruskal-Wallis comparison of true vs estimated level distributions per
// appliance, pooled over all timestamps. Both sides are expanded to per-user
// level observations; estimated counts are rounded and clamped at zero.
SimilarityReport similarity_report(
    const std::vector<Eigen::ArrayXXd>& true_level_counts,
    const std::vector<EstimatedHistogram>& estimated,
    const QuantizationScheme& scheme);

}  // namespace ldpse
