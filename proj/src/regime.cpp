#include "rwc/regime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rwc/error.hpp"

namespace rwc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Two-pass on values shifted by the first element, so a constant window
// gives exactly zero.
double sample_std(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  const double shift = xs.front();
  double mean = 0.0;
  for (double x : xs) mean += x - shift;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) {
    const double d = (x - shift) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / (n - 1.0));
}

}  // namespace

double rv21(std::span<const double> returns, std::size_t t) {
  if (t < kRv21Window || t > returns.size())
    throw Error(ErrorCode::InsufficientHistory, "rv21 needs 21 prior returns at index " + std::to_string(t));
  return std::sqrt(252.0) * sample_std(returns.subspan(t - kRv21Window, kRv21Window));
}

double mar5(std::span<const double> returns, std::size_t t) {
  if (t < kMar5Window || t > returns.size())
    throw Error(ErrorCode::InsufficientHistory, "mar5 needs 5 prior returns at index " + std::to_string(t));
  double sum = 0.0;
  for (std::size_t j = 1; j <= kMar5Window; ++j) sum += std::abs(returns[t - j]);
  return sum / static_cast<double>(kMar5Window);
}

RegimePoint StandardizationStats::apply(const RegimePoint& raw) const noexcept {
  return {(raw[0] - mean[0]) / std[0], (raw[1] - mean[1]) / std[1]};
}

RegimePoint StandardizationStats::invert(const RegimePoint& z) const noexcept {
  return {z[0] * std[0] + mean[0], z[1] * std[1] + mean[1]};
}

StandardizationStats fit_standardizer(std::span<const RegimePoint> raw, IndexRange range) {
  if (range.end > raw.size() || range.size() < 2)
    throw Error(ErrorCode::InsufficientHistory, "standardizer needs at least two points in range");
  StandardizationStats st;
  st.source_range = range;
  std::vector<double> column(range.size());
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t i = range.begin; i < range.end; ++i) {
      if (!std::isfinite(raw[i][k]))
        throw Error(ErrorCode::InsufficientHistory, "non-finite regime feature at index " + std::to_string(i));
      column[i - range.begin] = raw[i][k];
    }
    st.mean[k] = std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(column.size());
    st.std[k] = sample_std(column);
    if (!(st.std[k] > 0.0)) throw Error(ErrorCode::DegenerateFeature, "coordinate " + std::to_string(k));
  }
  return st;
}

StandardizeOn parse_standardize_on(std::string_view text) {
  if (text == "train") return StandardizeOn::Train;
  if (text == "pretest") return StandardizeOn::Pretest;
  throw Error(ErrorCode::InvalidConfig, "standardize-on must be train|pretest");
}

std::string_view to_string(StandardizeOn s) {
  return s == StandardizeOn::Train ? "train" : "pretest";
}

std::vector<RegimePoint> raw_embedding(std::span<const double> returns) {
  std::vector<RegimePoint> raw(returns.size(), RegimePoint{kNaN, kNaN});
  for (std::size_t t = kEmbeddingWarmup; t < returns.size(); ++t)
    raw[t] = {rv21(returns, t), mar5(returns, t)};
  return raw;
}

RegimeEmbedding build_embedding(const ReturnSeries& returns, IndexRange stats_range) {
  RegimeEmbedding emb;
  emb.dates = returns.dates;
  emb.raw = raw_embedding(returns.returns);
  stats_range.begin = std::max(stats_range.begin, kEmbeddingWarmup);
  emb.stats = fit_standardizer(emb.raw, stats_range);
  emb.standardized.assign(emb.raw.size(), RegimePoint{kNaN, kNaN});
  for (std::size_t t = kEmbeddingWarmup; t < emb.raw.size(); ++t)
    emb.standardized[t] = emb.stats.apply(emb.raw[t]);
  return emb;
}

std::vector<int> assign_vol_quintiles(std::span<const double> rv) {
  const std::size_t n = rv.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rv[a] < rv[b]; });

  const std::size_t base = n / 5;
  const std::size_t extra = n % 5;
  std::vector<int> labels(n, 0);
  std::size_t rank = 0;
  for (int bucket = 0; bucket < 5; ++bucket) {
    const std::size_t size = base + (static_cast<std::size_t>(bucket) < extra ? 1 : 0);
    for (std::size_t k = 0; k < size; ++k) labels[order[rank++]] = bucket;
  }
  return labels;
}

}  // namespace rwc
