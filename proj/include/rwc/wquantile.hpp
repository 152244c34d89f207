#pragma once

#include <cstddef>
#include <span>

namespace rwc {

/// Slack allowed when comparing cumulative weight against a level; weights
/// are only required to sum to one within this tolerance.
inline constexpr double kMassTolerance = 1e-12;

/// inf{ q : sum_i w_i 1{v_i <= q} >= gamma }, evaluated over the input values.
///
/// Equal values have their weights merged before the cumulative test, so the
/// result depends only on the multiset of (value, weight) pairs. A level at or
/// above the total mass returns the largest value carrying positive weight.
double weighted_quantile(std::span<const double> values, std::span<const double> weights, double gamma);

/// 1-based rank used by the "higher" empirical quantile convention:
/// ceil(gamma * n), clamped to [1, n].
std::size_t higher_rank(double gamma, std::size_t n);

/// Unweighted empirical quantile, higher convention (order statistic at
/// higher_rank(gamma, n)).
double empirical_quantile_higher(std::span<const double> values, double gamma);

/// min{1, (1 - alpha)(1 + w_test / total_weight)}.
double inflated_level(double alpha, double total_weight, double w_test);

/// Conformal buffer c_t: the weighted quantile of the scores at 1 - alpha, or
/// at the inflated level when `correction` is set. Levels >= 1 return the
/// maximum score.
double conformal_threshold(std::span<const double> scores, std::span<const double> normalized_weights,
                           double alpha, bool correction, double total_weight, double w_test = 1.0);

/// Randomized weighted conformal p-value for a one-sided score.
double conformal_pvalue(std::span<const double> scores, std::span<const double> unnormalized_weights,
                        double s_test, double w_test, double u);

}  // namespace rwc
