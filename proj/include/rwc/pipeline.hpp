#pragma once

#include <filesystem>
#include <optional>

#include "rwc/calibrators.hpp"
#include "rwc/data.hpp"
#include "rwc/forecasters.hpp"
#include "rwc/regime.hpp"

namespace rwc {

struct ForecastOptions {
  BaseKind base = BaseKind::HS;
  std::size_t hs_window = kDefaultHsWindow;
  GbdtParams gbdt;
  std::filesystem::path forecasts_file;  // BaseKind::External only
};

/// Everything a calibrator run needs, computed once per dataset.
struct Dataset {
  ReturnSeries returns;
  LossSeries losses;
  SplitRanges splits;
  RegimeEmbedding embedding;
  ForecastSeries forecasts;
  double alpha = 0.01;
};

Dataset prepare_dataset(ReturnSeries returns, const SplitConfig& split_cfg, double alpha,
                        StandardizeOn standardize_on, const ForecastOptions& forecast);

/// Same, with explicit split ranges (used by tests and synthetic runs).
Dataset prepare_dataset(ReturnSeries returns, const SplitRanges& splits, double alpha,
                        StandardizeOn standardize_on, const ForecastOptions& forecast);

BoundSeries run_method(const Dataset& data, Method method, const RunConfig& cfg, IndexRange eval);

/// Quintile labels for the records of `b`, ranked by raw RV21 over `b`'s dates.
std::vector<int> quintile_labels_for(const Dataset& data, const BoundSeries& b);

}  // namespace rwc
