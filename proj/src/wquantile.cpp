#include "rwc/wquantile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "rwc/error.hpp"

namespace rwc {

namespace {

void check_values(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "quantile of an empty set");
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "non-finite score");
}

}  // namespace

double weighted_quantile(std::span<const double> values, std::span<const double> weights, double gamma) {
  check_values(values);
  if (weights.size() != values.size())
    throw Error(ErrorCode::IndexMismatch, "values and weights differ in length");
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidConfig, "quantile level must be > 0");

  std::vector<std::pair<double, double>> pairs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw Error(ErrorCode::NonFiniteValue, "negative or NaN weight");
    pairs[i] = {values[i], weights[i]};
  }
  // Sorting on the full pair fixes the summation order inside tie groups.
  std::sort(pairs.begin(), pairs.end());

  const double target = gamma - kMassTolerance;
  double cumulative = 0.0;
  double last_positive = pairs.front().first;
  std::size_t i = 0;
  while (i < pairs.size()) {
    const double v = pairs[i].first;
    double mass = 0.0;
    for (; i < pairs.size() && pairs[i].first == v; ++i) mass += pairs[i].second;
    cumulative += mass;
    if (mass > 0.0) {
      last_positive = v;
      if (cumulative >= target) return v;
    }
  }
  return last_positive;
}

std::size_t higher_rank(double gamma, std::size_t n) {
  const double r = std::ceil(static_cast<double>(n) * (gamma - kMassTolerance));
  if (!(r >= 1.0)) return 1;
  return std::min(n, static_cast<std::size_t>(r));
}

double empirical_quantile_higher(std::span<const double> values, double gamma) {
  check_values(values);
  std::vector<double> sorted(values.begin(), values.end());
  const std::size_t k = higher_rank(gamma, sorted.size());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end());
  return sorted[k - 1];
}

double inflated_level(double alpha, double total_weight, double w_test) {
  if (!(total_weight > 0.0)) throw Error(ErrorCode::InvalidConfig, "total calibration weight must be > 0");
  return std::min(1.0, (1.0 - alpha) * (1.0 + w_test / total_weight));
}

double conformal_threshold(std::span<const double> scores, std::span<const double> normalized_weights,
                           double alpha, bool correction, double total_weight, double w_test) {
  check_values(scores);
  const double level = correction ? inflated_level(alpha, total_weight, w_test) : 1.0 - alpha;
  if (level >= 1.0) return *std::max_element(scores.begin(), scores.end());
  return weighted_quantile(scores, normalized_weights, level);
}

double conformal_pvalue(std::span<const double> scores, std::span<const double> unnormalized_weights,
                        double s_test, double w_test, double u) {
  check_values(scores);
  if (unnormalized_weights.size() != scores.size())
    throw Error(ErrorCode::IndexMismatch, "scores and weights differ in length");
  double total = 0.0;
  double upper = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    total += unnormalized_weights[i];
    if (scores[i] >= s_test) upper += unnormalized_weights[i];
  }
  return (upper + w_test * u) / (total + w_test);
}

}  // namespace rwc
