#include "rwc/calibrators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rwc/error.hpp"
#include "rwc/weighting.hpp"
#include "rwc/wquantile.hpp"

namespace rwc {

std::vector<int> BoundSeries::indicators() const {
  std::vector<int> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.exceed ? 1 : 0);
  return out;
}

std::vector<double> BoundSeries::bounds() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.bound);
  return out;
}

std::vector<double> BoundSeries::n_effs() const {
  std::vector<double> out;
  for (const auto& r : records) out.push_back(r.n_eff);
  return out;
}

std::vector<double> BoundSeries::taus() const {
  std::vector<double> out;
  for (const auto& r : records) out.push_back(r.tau);
  return out;
}

std::size_t BoundSeries::fallback_count() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.fallback; }));
}

void CalibrationBuffer::push(std::size_t index, double score, const RegimePoint& z) {
  if (!entries_.empty() && index <= entries_.back().index)
    throw Error(ErrorCode::IndexMismatch, "calibration indices must increase");
  entries_.push_back({index, score, z});
  while (entries_.size() > capacity_) entries_.pop_front();
}

void CalibrationBuffer::restrict_to(std::size_t t) {
  while (!entries_.empty() && entries_.front().index + capacity_ < t) entries_.pop_front();
}

std::vector<std::size_t> CalibrationBuffer::indices() const {
  std::vector<std::size_t> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.index);
  return out;
}

std::vector<double> CalibrationBuffer::scores() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.score);
  return out;
}

std::vector<RegimePoint> CalibrationBuffer::embeddings() const {
  std::vector<RegimePoint> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.z);
  return out;
}

void AciState::update(bool exceeded) {
  alpha_t = std::clamp(alpha_t + gamma * (target - (exceeded ? 1.0 : 0.0)), alpha_min, alpha_max);
}

BoundSeries run_calibrator(Method method, const LossSeries& losses, const ForecastSeries& forecasts,
                           const RegimeEmbedding* embedding, const RunConfig& cfg, IndexRange eval) {
  cfg.validate();
  const std::size_t n = losses.size();
  if (forecasts.size() != n) throw Error(ErrorCode::IndexMismatch, "forecasts and losses differ in length");
  if (eval.end > n || eval.empty()) throw Error(ErrorCode::EmptySegment, "evaluation range");
  const bool regime = method == Method::RWC && !std::isinf(cfg.h);
  if (regime) {
    if (embedding == nullptr) throw Error(ErrorCode::InvalidConfig, "RWC with finite h needs a regime embedding");
    if (embedding->size() != n) throw Error(ErrorCode::IndexMismatch, "embedding and losses differ in length");
  }

  std::size_t start = forecasts.valid_from;
  if (regime) start = std::max(start, embedding->valid_from);

  BoundSeries out;
  out.label = std::string(to_string(method));
  CalibrationBuffer buffer(cfg.m);
  AciState aci{cfg.alpha, cfg.alpha, method == Method::ACI ? cfg.aci_gamma : 0.0, cfg.aci_alpha_min,
               cfg.aci_alpha_max};

  for (std::size_t t = start; t < eval.end; ++t) {
    const double qhat = forecasts.qhat[t];
    if (!std::isfinite(qhat)) {
      if (eval.contains(t)) throw Error(ErrorCode::DateMismatch, "missing forecast inside evaluation range");
      continue;
    }
    const RegimePoint z_t = regime ? embedding->standardized[t] : RegimePoint{};
    buffer.restrict_to(t);

    if (eval.contains(t) && !buffer.empty()) {
      const auto indices = buffer.indices();
      const auto scores = buffer.scores();
      WeightVector wv;
      switch (method) {
        case Method::SWC:
        case Method::ACI:
          wv = time_only_weights(t, indices, 0.0);
          break;
        case Method::TWC:
          wv = time_only_weights(t, indices, cfg.lambda);
          break;
        case Method::RWC:
          if (regime) {
            const auto zs = buffer.embeddings();
            wv = build_weights(t, indices, zs, z_t, cfg.lambda, cfg.h);
            if (cfg.n_min > 0)
              wv = apply_ess_safeguard(std::move(wv), time_only_weights(t, indices, cfg.lambda), cfg.n_min);
          } else {
            wv = time_only_weights(t, indices, cfg.lambda);
          }
          break;
      }
      if (wv.zero_total) ++out.zero_weight_steps;

      const double level_alpha = aci.alpha_t;
      const double chat =
          conformal_threshold(scores, wv.normalized, level_alpha, cfg.finite_sample_correction, wv.total, 1.0);
      BoundRecord rec;
      rec.index = t;
      rec.date = losses.dates[t];
      rec.qhat = qhat;
      rec.chat = chat;
      rec.bound = qhat + chat;
      rec.loss = losses.losses[t];
      rec.exceed = compute_score(rec.loss, qhat) > chat;
      rec.n_eff = wv.n_eff;
      rec.tau = wv.tau;
      rec.fallback = wv.fallback_used;
      rec.alpha_t = level_alpha;
      out.records.push_back(rec);
      aci.update(rec.exceed);
    }

    buffer.push(t, compute_score(losses.losses[t], qhat), z_t);
  }
  return out;
}

BoundSeries run_swc(const LossSeries& losses, const ForecastSeries& forecasts, const RunConfig& cfg, IndexRange eval) {
  return run_calibrator(Method::SWC, losses, forecasts, nullptr, cfg, eval);
}

BoundSeries run_twc(const LossSeries& losses, const ForecastSeries& forecasts, const RunConfig& cfg, IndexRange eval) {
  return run_calibrator(Method::TWC, losses, forecasts, nullptr, cfg, eval);
}

BoundSeries run_rwc(const LossSeries& losses, const ForecastSeries& forecasts, const RegimeEmbedding& embedding,
                    const RunConfig& cfg, IndexRange eval) {
  return run_calibrator(Method::RWC, losses, forecasts, &embedding, cfg, eval);
}

BoundSeries run_aci(const LossSeries& losses, const ForecastSeries& forecasts, const RunConfig& cfg, IndexRange eval) {
  return run_calibrator(Method::ACI, losses, forecasts, nullptr, cfg, eval);
}

BoundSeries base_bounds(const LossSeries& losses, const ForecastSeries& forecasts, IndexRange eval, double alpha) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  if (forecasts.size() != losses.size()) throw Error(ErrorCode::IndexMismatch, "forecasts and losses differ in length");
  if (eval.end > losses.size() || eval.empty()) throw Error(ErrorCode::EmptySegment, "evaluation range");
  BoundSeries out;
  out.label = "base";
  for (std::size_t t = eval.begin; t < eval.end; ++t) {
    const double qhat = forecasts.qhat[t];
    if (!std::isfinite(qhat)) throw Error(ErrorCode::DateMismatch, "missing forecast inside evaluation range");
    BoundRecord rec;
    rec.index = t;
    rec.date = losses.dates[t];
    rec.qhat = qhat;
    rec.chat = 0.0;
    rec.bound = qhat;
    rec.loss = losses.losses[t];
    rec.exceed = rec.loss > qhat;
    rec.n_eff = kNaN;
    rec.tau = kNaN;
    rec.alpha_t = alpha;
    out.records.push_back(rec);
  }
  return out;
}

}  // namespace rwc
