#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rwc/data.hpp"

namespace rwc {

/// Base (1 - alpha)-quantile forecasts aligned with a loss series. Entries
/// before `valid_from` (and any uncovered dates of external forecasts) are NaN.
struct ForecastSeries {
  std::vector<Date> dates;
  std::vector<double> qhat;
  std::size_t valid_from = 0;
  // Number of training windows whose targets were all equal.
  std::size_t degenerate_fits = 0;

  std::size_t size() const noexcept { return qhat.size(); }
};

/// Causal covariates: row t only uses returns with index <= t - 1.
struct FeatureMatrix {
  std::vector<Date> dates;
  std::vector<std::string> names;
  std::vector<double> values;  // row-major, rows() x cols()
  std::size_t valid_from = 0;

  std::size_t rows() const noexcept { return dates.size(); }
  std::size_t cols() const noexcept { return names.size(); }
  std::span<const double> row(std::size_t t) const { return {values.data() + t * cols(), cols()}; }
};

/// r_{t-1..t-5}, RV21_t, MAR5_t.
FeatureMatrix default_features(const ReturnSeries& returns);

inline constexpr std::size_t kDefaultHsWindow = 252;

/// Rolling historical-simulation VaR: higher-convention empirical (1 - alpha)
/// quantile of the previous `window` losses.
ForecastSeries hs_forecast(const LossSeries& losses, double alpha, std::size_t window = kDefaultHsWindow);

struct GbdtParams {
  std::size_t rounds = 200;
  std::size_t max_depth = 3;
  double learning_rate = 0.05;
  std::size_t min_samples_leaf = 5;
  std::size_t window = 252;
  std::size_t refit_every = 21;
};

inline constexpr std::size_t kMinGbdtWindow = 252;

/// Gradient-boosted regression trees trained on the pinball loss at level tau.
/// Trees are grown on pseudo-residuals with a least-squares split criterion;
/// each leaf is then set to the tau-quantile of the residuals it holds, scaled
/// by the learning rate.
class QuantileGbdt {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };
  using Tree = std::vector<Node>;

  QuantileGbdt(GbdtParams params, double tau) : params_(params), tau_(tau) {}

  /// `x` is row-major with `y.size()` rows of `n_features` columns.
  void fit(std::span<const double> x, std::size_t n_features, std::span<const double> y);
  double predict(std::span<const double> row) const;

  double base_score() const noexcept { return base_; }
  const std::vector<Tree>& trees() const noexcept { return trees_; }
  /// Mean pinball loss on the training set after 0, 1, ..., rounds trees.
  const std::vector<double>& loss_history() const noexcept { return loss_history_; }
  bool degenerate() const noexcept { return degenerate_; }

 private:
  GbdtParams params_;
  double tau_;
  double base_ = 0.0;
  bool degenerate_ = false;
  std::vector<Tree> trees_;
  std::vector<double> loss_history_;
};

double pinball_loss(double y, double q, double tau);

/// Rolling GBDT quantile forecasts. The model is refit every
/// `params.refit_every` steps on the trailing `params.window` rows and reused
/// in between.
ForecastSeries gbdt_quantile_forecast(const FeatureMatrix& features, const LossSeries& losses, double alpha,
                                      const GbdtParams& params = {});

struct ExternalForecasts {
  std::vector<Date> dates;
  std::vector<double> qhat;
};

/// Reads a `date,qhat` CSV.
ExternalForecasts load_external_forecasts(const std::filesystem::path& path);

/// Places external forecasts on the loss-series dates. Every date inside
/// `required` must be covered, otherwise DateMismatch.
ForecastSeries align_forecasts(const ExternalForecasts& ext, std::span<const Date> dates, IndexRange required);

}  // namespace rwc
