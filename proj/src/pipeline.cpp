#include "rwc/pipeline.hpp"

#include "rwc/error.hpp"

namespace rwc {

Dataset prepare_dataset(ReturnSeries returns, const SplitConfig& split_cfg, double alpha,
                        StandardizeOn standardize_on, const ForecastOptions& forecast) {
  const auto ranges = split(std::span<const Date>(returns.dates), split_cfg);
  return prepare_dataset(std::move(returns), ranges, alpha, standardize_on, forecast);
}

Dataset prepare_dataset(ReturnSeries returns, const SplitRanges& splits, double alpha,
                        StandardizeOn standardize_on, const ForecastOptions& forecast) {
  Dataset d;
  d.alpha = alpha;
  d.splits = splits;
  d.losses = to_losses(returns);
  const IndexRange stats = standardize_on == StandardizeOn::Train ? splits.train : splits.pretest();
  d.embedding = build_embedding(returns, stats);
  switch (forecast.base) {
    case BaseKind::HS:
      d.forecasts = hs_forecast(d.losses, alpha, forecast.hs_window);
      break;
    case BaseKind::GBDT:
      d.forecasts = gbdt_quantile_forecast(default_features(returns), d.losses, alpha, forecast.gbdt);
      break;
    case BaseKind::External:
      d.forecasts = align_forecasts(load_external_forecasts(forecast.forecasts_file), returns.dates, splits.test);
      break;
  }
  d.returns = std::move(returns);
  return d;
}

BoundSeries run_method(const Dataset& data, Method method, const RunConfig& cfg, IndexRange eval) {
  return run_calibrator(method, data.losses, data.forecasts, &data.embedding, cfg, eval);
}

std::vector<int> quintile_labels_for(const Dataset& data, const BoundSeries& b) {
  std::vector<double> rv;
  rv.reserve(b.size());
  for (const auto& r : b.records) rv.push_back(data.embedding.raw[r.index][0]);
  return assign_vol_quintiles(rv);
}

}  // namespace rwc
