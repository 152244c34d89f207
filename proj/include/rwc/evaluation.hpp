#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rwc/calibrators.hpp"
#include "rwc/data.hpp"

namespace rwc {

inline constexpr std::size_t kRollingWindow = 252;

double exceedance_rate(std::span<const int> indicators);
inline double exceedance_rate(const BoundSeries& b) { return exceedance_rate(b.indicators()); }

/// Mean bound in basis points.
double avg_var_bps(std::span<const double> bounds);
inline double avg_var_bps(const BoundSeries& b) { return avg_var_bps(b.bounds()); }

/// Trailing full-window exceedance rate. Element k covers indicators
/// [k, k + window); the result has size() - window + 1 entries.
std::vector<double> rolling_exceedance(std::span<const int> indicators, std::size_t window = kRollingWindow);

struct RollingPoint {
  Date date;
  double rate;
};
/// Same as above, each value dated at the last observation of its window.
std::vector<RollingPoint> rolling_exceedance(const BoundSeries& b, std::size_t window = kRollingWindow);

using QuintileRates = std::array<double, 5>;

/// Exceedance rate (%) per label 0..4. Empty buckets yield NaN.
QuintileRates regime_stratified(std::span<const int> indicators, std::span<const int> labels);

struct RegimeStability {
  double mae = 0.0;
  double max_dev = 0.0;
  double std = 0.0;  // population convention
};

/// Summaries of the per-quintile deviations from `target_pct` (pp).
RegimeStability regime_stability(const QuintileRates& rates_pct, double target_pct);

/// Chi-squared survival function for 1 or 2 degrees of freedom.
double chi2_sf(double x, int dof);

struct LrTest {
  double lr = 0.0;
  double p = 1.0;
};

/// Kupiec proportion-of-failures test.
LrTest kupiec_uc(std::size_t n, std::size_t x, double alpha);

struct TransitionCounts {
  std::size_t n00 = 0, n01 = 0, n10 = 0, n11 = 0;
};
TransitionCounts transition_counts(std::span<const int> indicators);

struct ChristoffersenResult {
  LrTest ind;
  LrTest uc;
  LrTest cc;  // lr_cc = lr_uc + lr_ind
};

/// Christoffersen independence and conditional-coverage tests.
ChristoffersenResult christoffersen(std::span<const int> indicators, double alpha);

/// Linear-interpolation percentile, q in [0, 1]. NaN entries are ignored.
double percentile(std::span<const double> xs, double q);

struct WeightDiagnostics {
  double median_n_eff = 0.0;
  double p10_n_eff = 0.0;
  double median_tau = 0.0;
  double p90_tau = 0.0;
};
WeightDiagnostics weight_diagnostics(const BoundSeries& b);

struct BacktestReport {
  std::string method;
  std::size_t n = 0;
  std::size_t exceed_count = 0;
  double exceedance_pct = 0.0;
  double avg_var_bps = 0.0;
  LrTest uc;
  LrTest ind;
  LrTest cc;
  QuintileRates per_quintile_pct{};
  std::array<std::size_t, 5> quintile_sizes{};
  RegimeStability stability;
  std::vector<RollingPoint> rolling;
  WeightDiagnostics weight_diag;
  std::size_t fallback_steps = 0;
};

/// `labels` parallels `b.records`.
BacktestReport make_report(const BoundSeries& b, std::span<const int> labels, double alpha);

/// Three decimals, or two-digit scientific notation below 1e-3.
std::string format_pvalue(double p);

}  // namespace rwc
