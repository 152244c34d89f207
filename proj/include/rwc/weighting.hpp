#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rwc/regime.hpp"

namespace rwc {

/// Calibration weights for one time step, plus the diagnostics derived from
/// them. `normalized` sums to one; `n_eff` lies in [1, size()] and `tau` is
/// the weighted mean lag in steps.
struct WeightVector {
  std::size_t t = 0;
  std::vector<std::size_t> indices;
  std::vector<double> unnormalized;
  std::vector<double> normalized;
  double total = 0.0;
  double n_eff = 0.0;
  double tau = 0.0;
  bool fallback_used = false;
  // Every raw weight underflowed and uniform weights were substituted.
  bool zero_total = false;

  std::size_t size() const noexcept { return indices.size(); }
};

/// Raw weights below this are flushed to zero before normalization.
inline constexpr double kWeightUnderflow = 1e-300;

double recency_weight(std::size_t t, std::size_t i, double lambda);
double gaussian_kernel(const RegimePoint& zi, const RegimePoint& zt, double h);

/// Normalizes the given raw weights and fills in total, n_eff and tau.
WeightVector finalize_weights(std::size_t t, std::vector<std::size_t> indices,
                              std::vector<double> unnormalized);

/// Recency times regime-similarity weights over the calibration indices.
/// `z_buffer` must parallel `indices` unless h is infinite, in which case it
/// is ignored.
WeightVector build_weights(std::size_t t, std::span<const std::size_t> indices,
                           std::span<const RegimePoint> z_buffer, const RegimePoint& z_t,
                           double lambda, double h);

WeightVector time_only_weights(std::size_t t, std::span<const std::size_t> indices, double lambda);

/// Returns `time_only` (flagged) when wv.n_eff < n_min, otherwise `wv`.
/// n_min == 0 disables the check.
WeightVector apply_ess_safeguard(WeightVector wv, WeightVector time_only, std::size_t n_min);

}  // namespace rwc
