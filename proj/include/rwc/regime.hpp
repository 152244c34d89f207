#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "rwc/data.hpp"

namespace rwc {

/// Regime feature vector: {annualized 21-day realized vol, 5-day mean |r|}.
using RegimePoint = std::array<double, 2>;

inline constexpr std::size_t kRv21Window = 21;
inline constexpr std::size_t kMar5Window = 5;
/// First index at which both features are defined.
inline constexpr std::size_t kEmbeddingWarmup = kRv21Window;

/// sqrt(252) times the sample std of returns[t-21 .. t-1].
double rv21(std::span<const double> returns, std::size_t t);
/// Mean of |returns[t-j]| for j = 1..5.
double mar5(std::span<const double> returns, std::size_t t);

struct StandardizationStats {
  RegimePoint mean{};
  RegimePoint std{};
  IndexRange source_range;

  RegimePoint apply(const RegimePoint& raw) const noexcept;
  RegimePoint invert(const RegimePoint& z) const noexcept;
};

/// Per-coordinate mean and sample std of raw[range]. Throws DegenerateFeature
/// if a coordinate is constant over the range.
StandardizationStats fit_standardizer(std::span<const RegimePoint> raw, IndexRange range);

enum class StandardizeOn { Train, Pretest };
StandardizeOn parse_standardize_on(std::string_view text);
std::string_view to_string(StandardizeOn s);

struct RegimeEmbedding {
  std::vector<Date> dates;
  std::vector<RegimePoint> raw;           // NaN before valid_from
  std::vector<RegimePoint> standardized;  // NaN before valid_from
  std::size_t valid_from = kEmbeddingWarmup;
  StandardizationStats stats;

  std::size_t size() const noexcept { return raw.size(); }
};

/// Raw causal features for every index; entries before kEmbeddingWarmup are NaN.
std::vector<RegimePoint> raw_embedding(std::span<const double> returns);

/// Builds and standardizes the embedding. `stats_range` is clipped to start at
/// the warm-up index.
RegimeEmbedding build_embedding(const ReturnSeries& returns, IndexRange stats_range);

/// Rank-based volatility quintile labels 0..4. Bucket sizes differ by at most
/// one with the larger buckets first; ties go to the earlier date first.
std::vector<int> assign_vol_quintiles(std::span<const double> rv);

}  // namespace rwc
