#include "rwc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "rwc/error.hpp"

namespace rwc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// c * ln(a / b) with 0 * ln(0) = 0.
double xlogratio(double c, double a, double b) {
  if (c == 0.0) return 0.0;
  return c * std::log(a / b);
}

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

}  // namespace

double exceedance_rate(std::span<const int> indicators) {
  if (indicators.empty()) throw Error(ErrorCode::EmptyInput, "no exceedance indicators");
  const auto hits = std::count(indicators.begin(), indicators.end(), 1);
  return static_cast<double>(hits) / static_cast<double>(indicators.size());
}

double avg_var_bps(std::span<const double> bounds) {
  if (bounds.empty()) throw Error(ErrorCode::EmptyInput, "no bounds");
  return std::accumulate(bounds.begin(), bounds.end(), 0.0) / static_cast<double>(bounds.size()) * 10000.0;
}

std::vector<double> rolling_exceedance(std::span<const int> indicators, std::size_t window) {
  if (window == 0 || indicators.size() < window)
    throw Error(ErrorCode::InsufficientLength, "need at least " + std::to_string(window) + " indicators");
  std::vector<double> out;
  out.reserve(indicators.size() - window + 1);
  long count = 0;
  for (std::size_t i = 0; i < indicators.size(); ++i) {
    count += indicators[i];
    if (i >= window) count -= indicators[i - window];
    if (i + 1 >= window) out.push_back(static_cast<double>(count) / static_cast<double>(window));
  }
  return out;
}

std::vector<RollingPoint> rolling_exceedance(const BoundSeries& b, std::size_t window) {
  const auto rates = rolling_exceedance(b.indicators(), window);
  std::vector<RollingPoint> out(rates.size());
  for (std::size_t k = 0; k < rates.size(); ++k) out[k] = {b.records[k + window - 1].date, rates[k]};
  return out;
}

QuintileRates regime_stratified(std::span<const int> indicators, std::span<const int> labels) {
  if (indicators.size() != labels.size())
    throw Error(ErrorCode::LabelMismatch, "labels do not cover the indicator series");
  std::array<double, 5> hits{};
  std::array<double, 5> sizes{};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] > 4) throw Error(ErrorCode::LabelMismatch, "quintile label out of range");
    hits[labels[i]] += indicators[i];
    sizes[labels[i]] += 1.0;
  }
  QuintileRates out{};
  for (std::size_t k = 0; k < 5; ++k) out[k] = sizes[k] > 0 ? 100.0 * hits[k] / sizes[k] : kNaN;
  return out;
}

RegimeStability regime_stability(const QuintileRates& rates_pct, double target_pct) {
  std::array<double, 5> dev{};
  for (std::size_t k = 0; k < 5; ++k) dev[k] = rates_pct[k] - target_pct;
  RegimeStability s;
  double mean = 0.0;
  for (double d : dev) {
    s.mae += std::abs(d);
    s.max_dev = std::max(s.max_dev, std::abs(d));
    mean += d;
  }
  s.mae /= 5.0;
  mean /= 5.0;
  double ss = 0.0;
  for (double d : dev) ss += (d - mean) * (d - mean);
  s.std = std::sqrt(ss / 5.0);
  return s;
}

double chi2_sf(double x, int dof) {
  if (x <= 0.0) return 1.0;
  switch (dof) {
    case 1: return std::erfc(std::sqrt(x / 2.0));
    case 2: return std::exp(-x / 2.0);
    default: throw Error(ErrorCode::InvalidConfig, "chi2_sf supports 1 or 2 degrees of freedom");
  }
}

LrTest kupiec_uc(std::size_t n, std::size_t x, double alpha) {
  if (n == 0 || x > n) throw Error(ErrorCode::InvalidCount, "need 0 <= x <= n and n >= 1");
  const double nn = static_cast<double>(n);
  const double xx = static_cast<double>(x);
  const double phat = xx / nn;
  const double lr = 2.0 * (xlogratio(nn - xx, 1.0 - phat, 1.0 - alpha) + xlogratio(xx, phat, alpha));
  LrTest out;
  out.lr = std::max(0.0, lr);
  out.p = chi2_sf(out.lr, 1);
  return out;
}

TransitionCounts transition_counts(std::span<const int> indicators) {
  TransitionCounts c;
  for (std::size_t i = 1; i < indicators.size(); ++i) {
    const int a = indicators[i - 1], b = indicators[i];
    if (a == 0 && b == 0) ++c.n00;
    else if (a == 0) ++c.n01;
    else if (b == 0) ++c.n10;
    else ++c.n11;
  }
  return c;
}

ChristoffersenResult christoffersen(std::span<const int> indicators, double alpha) {
  if (indicators.size() < 2) throw Error(ErrorCode::InsufficientLength, "Christoffersen test needs two indicators");
  const auto c = transition_counts(indicators);
  const double n00 = static_cast<double>(c.n00), n01 = static_cast<double>(c.n01);
  const double n10 = static_cast<double>(c.n10), n11 = static_cast<double>(c.n11);

  const double from0 = n00 + n01;
  const double from1 = n10 + n11;
  const double total = from0 + from1;
  const double pi01 = from0 > 0 ? n01 / from0 : 0.0;
  const double pi11 = from1 > 0 ? n11 / from1 : 0.0;
  const double pi = (n01 + n11) / total;

  const double ll_markov = xlogy(n00, 1.0 - pi01) + xlogy(n01, pi01) + xlogy(n10, 1.0 - pi11) + xlogy(n11, pi11);
  const double ll_iid = xlogy(n00 + n10, 1.0 - pi) + xlogy(n01 + n11, pi);

  ChristoffersenResult r;
  r.ind.lr = std::max(0.0, 2.0 * (ll_markov - ll_iid));
  r.ind.p = chi2_sf(r.ind.lr, 1);
  const auto hits = static_cast<std::size_t>(std::count(indicators.begin(), indicators.end(), 1));
  r.uc = kupiec_uc(indicators.size(), hits, alpha);
  r.cc.lr = r.uc.lr + r.ind.lr;
  r.cc.p = chi2_sf(r.cc.lr, 2);
  return r;
}

double percentile(std::span<const double> xs, double q) {
  std::vector<double> v;
  v.reserve(xs.size());
  for (double x : xs)
    if (!std::isnan(x)) v.push_back(x);
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + (v[hi] - v[lo]) * frac;
}

WeightDiagnostics weight_diagnostics(const BoundSeries& b) {
  const auto ne = b.n_effs();
  const auto ta = b.taus();
  return {percentile(ne, 0.5), percentile(ne, 0.1), percentile(ta, 0.5), percentile(ta, 0.9)};
}

BacktestReport make_report(const BoundSeries& b, std::span<const int> labels, double alpha) {
  const auto ind = b.indicators();
  BacktestReport r;
  r.method = b.label;
  r.n = ind.size();
  r.exceed_count = static_cast<std::size_t>(std::count(ind.begin(), ind.end(), 1));
  r.exceedance_pct = 100.0 * exceedance_rate(ind);
  r.avg_var_bps = avg_var_bps(b);
  const auto cc = christoffersen(ind, alpha);
  r.uc = cc.uc;
  r.ind = cc.ind;
  r.cc = cc.cc;
  r.per_quintile_pct = regime_stratified(ind, labels);
  for (int l : labels) ++r.quintile_sizes[static_cast<std::size_t>(l)];
  r.stability = regime_stability(r.per_quintile_pct, 100.0 * alpha);
  if (ind.size() >= kRollingWindow) r.rolling = rolling_exceedance(b);
  r.weight_diag = weight_diagnostics(b);
  r.fallback_steps = b.fallback_count();
  return r;
}

std::string format_pvalue(double p) {
  char buf[32];
  if (p < 1e-3)
    std::snprintf(buf, sizeof buf, "%.2e", p);
  else
    std::snprintf(buf, sizeof buf, "%.3f", p);
  return buf;
}

}  // namespace rwc
