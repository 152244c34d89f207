#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "rwc/data.hpp"
#include "rwc/forecasters.hpp"
#include "rwc/regime.hpp"

namespace rwc {

/// s_t = y_t - qhat_t.
inline double compute_score(double loss, double qhat) { return loss - qhat; }

struct BoundRecord {
  std::size_t index = 0;
  Date date;
  double qhat = 0.0;
  double chat = 0.0;
  double bound = 0.0;  // qhat + chat
  double loss = 0.0;
  bool exceed = false;  // loss > bound, equivalently score > chat
  double n_eff = 0.0;
  double tau = 0.0;
  bool fallback = false;
  double alpha_t = 0.0;  // miscoverage level applied at this step

  friend bool operator==(const BoundRecord&, const BoundRecord&) = default;
};

struct BoundSeries {
  std::string label;
  std::vector<BoundRecord> records;
  // Steps where every weight underflowed and uniform weights were used.
  std::size_t zero_weight_steps = 0;

  std::size_t size() const noexcept { return records.size(); }
  std::vector<int> indicators() const;
  std::vector<double> bounds() const;
  std::vector<double> n_effs() const;
  std::vector<double> taus() const;
  std::size_t fallback_count() const;
};

/// Rolling store of the most recent calibration scores and their regime
/// embeddings. Indices are strictly increasing; at most `capacity` entries.
class CalibrationBuffer {
 public:
  struct Entry {
    std::size_t index;
    double score;
    RegimePoint z;
  };

  explicit CalibrationBuffer(std::size_t capacity) : capacity_(capacity) {}

  void push(std::size_t index, double score, const RegimePoint& z);
  /// Drops entries outside I_t = [t - m, t - 1].
  void restrict_to(std::size_t t);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t capacity() const noexcept { return capacity_; }
  const std::deque<Entry>& entries() const noexcept { return entries_; }

  std::vector<std::size_t> indices() const;
  std::vector<double> scores() const;
  std::vector<RegimePoint> embeddings() const;

 private:
  std::size_t capacity_;
  std::deque<Entry> entries_;
};

/// Adaptive miscoverage level with projected updates.
struct AciState {
  double target = 0.01;
  double alpha_t = 0.01;
  double gamma = 0.0;
  double alpha_min = 1e-4;
  double alpha_max = 0.2;

  void update(bool exceeded);
};

/// Sequential calibration over `eval`. Scores from every forecastable index
/// before `eval.begin` prime the buffer. `embedding` is only read for RWC.
///
/// Records start at the first eval index with a nonempty buffer. No record at
/// index t depends on losses at or after t.
BoundSeries run_calibrator(Method method, const LossSeries& losses, const ForecastSeries& forecasts,
                           const RegimeEmbedding* embedding, const RunConfig& cfg, IndexRange eval);

BoundSeries run_swc(const LossSeries& losses, const ForecastSeries& forecasts, const RunConfig& cfg, IndexRange eval);
BoundSeries run_twc(const LossSeries& losses, const ForecastSeries& forecasts, const RunConfig& cfg, IndexRange eval);
BoundSeries run_rwc(const LossSeries& losses, const ForecastSeries& forecasts, const RegimeEmbedding& embedding,
                    const RunConfig& cfg, IndexRange eval);
BoundSeries run_aci(const LossSeries& losses, const ForecastSeries& forecasts, const RunConfig& cfg, IndexRange eval);

/// The uncalibrated base forecaster as a bound series (chat = 0).
BoundSeries base_bounds(const LossSeries& losses, const ForecastSeries& forecasts, IndexRange eval, double alpha);

}  // namespace rwc
