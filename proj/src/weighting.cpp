#include "rwc/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "rwc/error.hpp"

namespace rwc {

double recency_weight(std::size_t t, std::size_t i, double lambda) {
  const double lag = static_cast<double>(t) - static_cast<double>(i);
  return std::exp(-lambda * lag);
}

double gaussian_kernel(const RegimePoint& zi, const RegimePoint& zt, double h) {
  if (std::isinf(h)) return 1.0;
  const double d0 = zi[0] - zt[0];
  const double d1 = zi[1] - zt[1];
  return std::exp(-(d0 * d0 + d1 * d1) / (2.0 * h * h));
}

WeightVector finalize_weights(std::size_t t, std::vector<std::size_t> indices,
                              std::vector<double> unnormalized) {
  if (indices.empty()) throw Error(ErrorCode::EmptyBuffer, "no calibration points at t=" + std::to_string(t));
  if (indices.size() != unnormalized.size())
    throw Error(ErrorCode::IndexMismatch, "weights and indices differ in length");

  WeightVector wv;
  wv.t = t;
  for (double& w : unnormalized)
    if (w < kWeightUnderflow) w = 0.0;
  double total = 0.0;
  for (double w : unnormalized) total += w;
  if (!(total > 0.0)) {
    // Every weight underflowed: fall back to uniform weights over I_t.
    static thread_local bool warned = false;
    if (!warned) {
      std::clog << "warning: calibration weights underflowed at t=" << t
                << "; using uniform weights\n";
      warned = true;
    }
    std::fill(unnormalized.begin(), unnormalized.end(), 1.0);
    total = static_cast<double>(unnormalized.size());
    wv.zero_total = true;
  }

  const double n = static_cast<double>(indices.size());
  wv.normalized.resize(unnormalized.size());
  double sum_sq = 0.0;
  double lag_sum = 0.0;
  for (std::size_t k = 0; k < unnormalized.size(); ++k) {
    wv.normalized[k] = unnormalized[k] / total;
    sum_sq += unnormalized[k] * unnormalized[k];
    lag_sum += unnormalized[k] * (static_cast<double>(t) - static_cast<double>(indices[k]));
  }
  wv.total = total;
  wv.n_eff = std::clamp(total * total / sum_sq, 1.0, n);
  wv.tau = lag_sum / total;
  wv.indices = std::move(indices);
  wv.unnormalized = std::move(unnormalized);
  return wv;
}

WeightVector build_weights(std::size_t t, std::span<const std::size_t> indices,
                           std::span<const RegimePoint> z_buffer, const RegimePoint& z_t,
                           double lambda, double h) {
  const bool use_kernel = !std::isinf(h);
  if (use_kernel && z_buffer.size() != indices.size())
    throw Error(ErrorCode::IndexMismatch, "embedding buffer does not match calibration indices");
  std::vector<double> raw(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= t) throw Error(ErrorCode::IndexMismatch, "calibration index not before t");
    raw[k] = recency_weight(t, indices[k], lambda);
    if (use_kernel) raw[k] *= gaussian_kernel(z_buffer[k], z_t, h);
  }
  return finalize_weights(t, {indices.begin(), indices.end()}, std::move(raw));
}

WeightVector time_only_weights(std::size_t t, std::span<const std::size_t> indices, double lambda) {
  return build_weights(t, indices, {}, RegimePoint{}, lambda, kInfiniteBandwidth);
}

WeightVector apply_ess_safeguard(WeightVector wv, WeightVector time_only, std::size_t n_min) {
  if (wv.t != time_only.t || wv.indices != time_only.indices)
    throw Error(ErrorCode::IndexMismatch, "safeguard inputs cover different index sets");
  if (n_min == 0 || !(wv.n_eff < static_cast<double>(n_min))) return wv;
  time_only.fallback_used = true;
  return time_only;
}

}  // namespace rwc
