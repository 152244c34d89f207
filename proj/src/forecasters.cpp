#include "rwc/forecasters.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "rwc/error.hpp"
#include "rwc/regime.hpp"
#include "rwc/wquantile.hpp"

namespace rwc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ForecastSeries empty_forecasts(std::span<const Date> dates) {
  ForecastSeries fs;
  fs.dates.assign(dates.begin(), dates.end());
  fs.qhat.assign(dates.size(), kNaN);
  return fs;
}

}  // namespace

FeatureMatrix default_features(const ReturnSeries& returns) {
  FeatureMatrix fm;
  fm.dates = returns.dates;
  fm.names = {"r_lag1", "r_lag2", "r_lag3", "r_lag4", "r_lag5", "rv21", "mar5"};
  fm.valid_from = kEmbeddingWarmup;
  const std::size_t n = returns.size();
  const std::size_t p = fm.names.size();
  fm.values.assign(n * p, kNaN);
  const auto raw = raw_embedding(returns.returns);
  for (std::size_t t = fm.valid_from; t < n; ++t) {
    double* row = fm.values.data() + t * p;
    for (std::size_t j = 1; j <= 5; ++j) row[j - 1] = returns.returns[t - j];
    row[5] = raw[t][0];
    row[6] = raw[t][1];
  }
  return fm;
}

ForecastSeries hs_forecast(const LossSeries& losses, double alpha, std::size_t window) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidConfig, "alpha must lie in (0,1)");
  if (static_cast<double>(window) < std::ceil(1.0 / alpha - kMassTolerance))
    throw Error(ErrorCode::InvalidConfig, "HS window must be at least ceil(1/alpha)");
  if (losses.size() <= window)
    throw Error(ErrorCode::InsufficientHistory, "series shorter than HS window");

  ForecastSeries fs = empty_forecasts(losses.dates);
  fs.valid_from = window;
  const std::span<const double> y(losses.losses);
  for (std::size_t t = window; t < losses.size(); ++t)
    fs.qhat[t] = empirical_quantile_higher(y.subspan(t - window, window), 1.0 - alpha);
  return fs;
}

double pinball_loss(double y, double q, double tau) {
  const double r = y - q;
  return r >= 0.0 ? tau * r : (tau - 1.0) * r;
}

namespace {

struct TreeBuilder {
  std::span<const double> x;
  std::size_t p;
  std::span<const double> grad;
  std::span<const double> residual;
  const GbdtParams& params;
  double tau;
  QuantileGbdt::Tree tree;

  double feature(std::size_t row, std::size_t f) const { return x[row * p + f]; }

  int grow(std::vector<std::size_t>& rows, std::size_t depth) {
    const int id = static_cast<int>(tree.size());
    tree.push_back({});

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_gain = 1e-12;
    if (depth < params.max_depth && rows.size() >= 2 * params.min_samples_leaf) {
      const double n = static_cast<double>(rows.size());
      double total = 0.0;
      for (auto r : rows) total += grad[r];
      const double parent = total * total / n;
      std::vector<std::size_t> order(rows);
      for (std::size_t f = 0; f < p; ++f) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          const double fa = feature(a, f), fb = feature(b, f);
          return fa < fb || (fa == fb && a < b);
        });
        double left_sum = 0.0;
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
          left_sum += grad[order[k]];
          const double v = feature(order[k], f);
          const double next = feature(order[k + 1], f);
          const std::size_t nl = k + 1;
          const std::size_t nr = order.size() - nl;
          if (v == next || nl < params.min_samples_leaf || nr < params.min_samples_leaf) continue;
          const double right_sum = total - left_sum;
          const double gain = left_sum * left_sum / static_cast<double>(nl) +
                              right_sum * right_sum / static_cast<double>(nr) - parent;
          if (gain > best_gain) {
            best_gain = gain;
            best_feature = static_cast<int>(f);
            best_threshold = v + (next - v) / 2.0;
          }
        }
      }
    }

    if (best_feature < 0) {
      std::vector<double> leaf(rows.size());
      for (std::size_t k = 0; k < rows.size(); ++k) leaf[k] = residual[rows[k]];
      tree[id].value = params.learning_rate * empirical_quantile_higher(leaf, tau);
      return id;
    }

    std::vector<std::size_t> left, right;
    for (auto r : rows)
      (feature(r, static_cast<std::size_t>(best_feature)) <= best_threshold ? left : right).push_back(r);
    tree[id].feature = best_feature;
    tree[id].threshold = best_threshold;
    const int l = grow(left, depth + 1);
    const int rgt = grow(right, depth + 1);
    tree[id].left = l;
    tree[id].right = rgt;
    return id;
  }
};

double evaluate(const QuantileGbdt::Tree& tree, std::span<const double> row) {
  int node = 0;
  while (tree[node].feature >= 0)
    node = row[tree[node].feature] <= tree[node].threshold ? tree[node].left : tree[node].right;
  return tree[node].value;
}

}  // namespace

void QuantileGbdt::fit(std::span<const double> x, std::size_t n_features, std::span<const double> y) {
  const std::size_t n = y.size();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "GBDT training set is empty");
  if (x.size() != n * n_features) throw Error(ErrorCode::IndexMismatch, "feature matrix shape mismatch");

  trees_.clear();
  loss_history_.clear();
  base_ = empirical_quantile_higher(y, tau_);
  degenerate_ = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });

  std::vector<double> pred(n, base_);
  std::vector<double> residual(n), grad(n);
  auto mean_loss = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += pinball_loss(y[i], pred[i], tau_);
    return s / static_cast<double>(n);
  };
  loss_history_.push_back(mean_loss());

  std::vector<std::size_t> rows(n);
  for (std::size_t round = 0; round < params_.rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      residual[i] = y[i] - pred[i];
      // Negative pinball subgradient; exact fits contribute zero.
      grad[i] = residual[i] > 0.0 ? tau_ : (residual[i] < 0.0 ? tau_ - 1.0 : 0.0);
    }
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    TreeBuilder builder{x, n_features, grad, residual, params_, tau_, {}};
    builder.grow(rows, 0);
    for (std::size_t i = 0; i < n; ++i) pred[i] += evaluate(builder.tree, x.subspan(i * n_features, n_features));
    trees_.push_back(std::move(builder.tree));
    loss_history_.push_back(mean_loss());
  }
}

double QuantileGbdt::predict(std::span<const double> row) const {
  double out = base_;
  for (const auto& tree : trees_) out += evaluate(tree, row);
  return out;
}

ForecastSeries gbdt_quantile_forecast(const FeatureMatrix& features, const LossSeries& losses, double alpha,
                                      const GbdtParams& params) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidConfig, "alpha must lie in (0,1)");
  if (params.window < kMinGbdtWindow)
    throw Error(ErrorCode::InvalidConfig, "GBDT window must be at least 252");
  if (params.refit_every == 0) throw Error(ErrorCode::InvalidConfig, "refit_every must be positive");
  if (features.rows() != losses.size()) throw Error(ErrorCode::IndexMismatch, "features and losses differ in length");

  const std::size_t first = features.valid_from + params.window;
  if (losses.size() <= first) throw Error(ErrorCode::InsufficientHistory, "series shorter than GBDT warm-up");

  ForecastSeries fs = empty_forecasts(losses.dates);
  fs.valid_from = first;
  const std::size_t p = features.cols();
  QuantileGbdt model(params, 1.0 - alpha);
  for (std::size_t t = first; t < losses.size(); ++t) {
    if ((t - first) % params.refit_every == 0) {
      const std::size_t lo = t - params.window;
      std::span<const double> x(features.values.data() + lo * p, params.window * p);
      std::span<const double> y(losses.losses.data() + lo, params.window);
      model.fit(x, p, y);
      if (model.degenerate()) ++fs.degenerate_fits;
    }
    fs.qhat[t] = model.predict(features.row(t));
  }
  return fs;
}

ExternalForecasts load_external_forecasts(const std::filesystem::path& path) {
  const ReturnSeries raw = load_returns_csv(path, "date", "qhat");
  return {raw.dates, raw.returns};
}

ForecastSeries align_forecasts(const ExternalForecasts& ext, std::span<const Date> dates, IndexRange required) {
  ForecastSeries fs = empty_forecasts(dates);
  std::size_t j = 0;
  for (std::size_t i = 0; i < dates.size(); ++i) {
    while (j < ext.dates.size() && ext.dates[j] < dates[i]) ++j;
    if (j < ext.dates.size() && ext.dates[j] == dates[i]) fs.qhat[i] = ext.qhat[j];
  }
  for (std::size_t i = required.begin; i < required.end; ++i)
    if (std::isnan(fs.qhat[i])) throw Error(ErrorCode::DateMismatch, "no forecast for " + format_date(dates[i]));
  fs.valid_from = dates.size();
  for (std::size_t i = 0; i < dates.size(); ++i)
    if (!std::isnan(fs.qhat[i])) {
      fs.valid_from = i;
      break;
    }
  return fs;
}

}  // namespace rwc
