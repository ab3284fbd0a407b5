#pragma once

// Sup-risk comparison of symmetric Dirichlet predictives, the bracket
// [Bayes risk of the truncated prior, sup risk] around the minimax risk, and
// a finite-N search for the best symmetric concentration.

#include <string>
#include <vector>

#include "mmn/exact_risk.hpp"
#include "mmn/model.hpp"
#include "mmn/numeric.hpp"
#include "mmn/separable_search.hpp"

namespace mmn {

struct LabeledPrior {
  std::string label;
  double alpha;
};

/// "jeffreys", "uniform", "minimax", or a positive number (labelled "alpha=<x>").
LabeledPrior parse_labeled_prior(const std::string& s);

struct PriorComparisonRow {
  std::string prior_label;
  double alpha = 0.0;
  int k = 2;
  int N = 0;
  double eps = 0.0;
  double sup_risk = 0.0;
  double excess_over_t1 = 0.0;  // sup_risk - (k-1)/(2N)
  double scaled_excess = 0.0;   // N^2 * excess_over_t1
  std::vector<double> argmax_theta;
};

/// One row per (prior, N), priors in the given order, N in list order.
std::vector<PriorComparisonRow> compare_priors(int k, const std::vector<int>& N_list, const EpsilonSchedule& schedule,
                                               const std::vector<LabeledPrior>& priors,
                                               const SearchSettings& search = {});

/// A named pass/fail outcome with the numbers that decided it.
struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// -(k-1)/12 * (1 + (7 + 2 sqrt 6) k): the N^-2 coefficient of the alpha_hat risk.
double minimax_second_order(int k);

/// Trend rule for N sweeps: last <= 0.6 * first.
inline constexpr double kTrendFactor = 0.6;
bool decreasing_trend(const std::vector<double>& series);

/// Checks on compare_priors rows. Jeffreys (alpha = 1/2): N^2 eps excess at
/// the largest N is at least 0.8/24 and N^2 excess grows across the sweep.
/// alpha_hat: every scaled excess is negative and the last lies within 10%
/// of minimax_second_order(k).
std::vector<CheckResult> compare_priors_checks(const std::vector<PriorComparisonRow>& rows);

struct SandwichRow {
  int k = 2;
  int N = 0;
  double eps = 0.0;
  double upper = 0.0;       // sup risk of the alpha_hat predictive over the truncated simplex
  double lower = 0.0;       // Bayes risk of the truncated alpha_hat prior's own predictive
  double gap_scaled = 0.0;  // N^2 (upper - lower)
  double full_bayes = 0.0;  // Bayes risk (truncated alpha_hat weight) of the untruncated predictive
  double corollary3_scaled = 0.0;  // N^2 (full_bayes - upper)
  double asymptotic = 0.0;  // (k-1)/(2N) + minimax_second_order(k)/N^2
};

std::vector<SandwichRow> theorem3_sandwich(int k, const std::vector<int>& N_list, const EpsilonSchedule& schedule,
                                           const numeric::QuadratureSettings& quad = {},
                                           const SearchSettings& search = {});

/// upper >= lower - 1e-12 at every N; gap_scaled and |corollary3_scaled|
/// follow the trend rule.
std::vector<CheckResult> sandwich_checks(const std::vector<SandwichRow>& rows);

struct AlphaCurvePoint {
  double alpha;
  double sup_risk;
};
struct OptimalAlphaResult {
  double alpha_star = 0.0;
  double eps = 0.0;
  std::vector<AlphaCurvePoint> curve;
};

/// Grid minimizer of the sup risk among symmetric priors. The grid must
/// cover [0.5, 2.5].
OptimalAlphaResult optimal_alpha_search(int k, int N, const EpsilonSchedule& schedule,
                                        const std::vector<double>& alpha_grid, const SearchSettings& search = {});

/// 0.5, 0.55, ..., 2.5.
std::vector<double> default_alpha_grid();

/// |alpha_star - alpha_hat| <= 0.2. A soft check: only asymptotic optimality is known.
CheckResult optimal_alpha_check(const OptimalAlphaResult& r, double tolerance = 0.2);

}  // namespace mmn
