#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sequences.hpp"
#include "rwc/error.hpp"
#include "rwc/evaluation.hpp"
#include "rwc/synth.hpp"

using namespace rwc;

namespace {

std::vector<int> bernoulli(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution bd(p);
  std::vector<int> x(n);
  for (int& v : x) v = bd(rng);
  return x;
}

BoundSeries series_of(const std::vector<int>& ind, const std::vector<double>& bounds) {
  BoundSeries b;
  auto dates = weekday_calendar(Date{std::chrono::year{2018}, std::chrono::January, std::chrono::day{17}}, ind.size());
  for (std::size_t i = 0; i < ind.size(); ++i) {
    BoundRecord r;
    r.index = i;
    r.date = dates[i];
    r.exceed = ind[i];
    r.bound = bounds[i];
    r.n_eff = 100.0 + i;
    r.tau = 50.0 + i;
    b.records.push_back(r);
  }
  return b;
}

}  // namespace

TEST_CASE("exceedance_rate examples") {
  CHECK(exceedance_rate(std::vector<int>(10, 0)) == 0.0);
  CHECK(exceedance_rate(std::vector<int>(10, 1)) == 1.0);
  std::vector<int> x(1751, 0);
  for (int i = 0; i < 20; ++i) x[i * 80] = 1;
  CHECK(100 * exceedance_rate(x) == doctest::Approx(1.1422).epsilon(1e-4));
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", 100 * exceedance_rate(x));
  CHECK(std::string(buf) == "1.14");
}

TEST_CASE("avg_var_bps examples") {
  CHECK(avg_var_bps(std::vector<double>(7, 0.0155)) == doctest::Approx(155.0).epsilon(1e-12));
  CHECK(avg_var_bps(std::vector<double>(3, 0.0)) == 0.0);
  std::vector<double> mixed{0.01, 0.02, 0.035, 0.0125};
  double hand = (0.01 + 0.02 + 0.035 + 0.0125) / 4 * 10000;
  CHECK(avg_var_bps(mixed) == doctest::Approx(hand).epsilon(1e-13));
}

TEST_CASE("rolling_exceedance examples") {
  auto flat = rolling_exceedance(std::vector<int>(300, 0));
  CHECK(flat.size() == 49);
  for (double v : flat) CHECK(v == 0.0);

  std::vector<int> one(800, 0);
  one[400] = 1;
  auto r = rolling_exceedance(one);
  std::size_t plateau = 0;
  for (double v : r)
    if (v > 0) {
      ++plateau;
      CHECK(v == doctest::Approx(1.0 / 252).epsilon(1e-15));
    }
  CHECK(plateau == 252);
  CHECK(1.0 / 252 * 100 == doctest::Approx(0.3968).epsilon(1e-4));

  auto x = bernoulli(1000, 0.02, 3);
  auto rr = rolling_exceedance(x);
  for (std::size_t k = 0; k < rr.size(); ++k) {
    int sum = 0;
    for (std::size_t j = k; j < k + 252; ++j) sum += x[j];
    CHECK(rr[k] == doctest::Approx(sum / 252.0).epsilon(1e-14));
    CHECK(rr[k] >= 0.0);
    CHECK(rr[k] <= 1.0);
    if (k > 0) {
      double step = std::round((rr[k] - rr[k - 1]) * 252);
      CHECK(std::abs(step) <= 1.0);
      CHECK(std::abs((rr[k] - rr[k - 1]) - step / 252) < 1e-12);
    }
  }
  try {
    rolling_exceedance(std::vector<int>(251, 0));
    FAIL("expected InsufficientLength");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientLength);
  }

  auto dated = rolling_exceedance(series_of(x, std::vector<double>(x.size(), 0.01)));
  REQUIRE(dated.size() == rr.size());
  auto dates = weekday_calendar(Date{std::chrono::year{2018}, std::chrono::January, std::chrono::day{17}}, x.size());
  CHECK(dated.front().date == dates[251]);
  CHECK(dated.back().rate == rr.back());
}

TEST_CASE("regime_stratified examples") {
  std::vector<int> ind(1000), labels(1000);
  for (int i = 0; i < 1000; ++i) {
    labels[i] = i % 5;
    ind[i] = (i / 5) % 10 == 0;
  }
  auto rates = regime_stratified(ind, labels);
  for (double r : rates) CHECK(r == doctest::Approx(10.0));

  std::vector<int> x{1, 0, 0, 1, 1, 0, 0, 0, 1, 0};
  std::vector<int> l{0, 0, 1, 1, 2, 2, 3, 3, 4, 4};
  auto hand = regime_stratified(x, l);
  CHECK(hand == QuintileRates{50.0, 50.0, 50.0, 0.0, 50.0});

  CHECK_THROWS_AS(regime_stratified(x, std::vector<int>(9, 0)), Error);
  auto bad = l;
  bad[3] = 5;
  CHECK_THROWS_AS(regime_stratified(x, bad), Error);
  auto empty = regime_stratified(std::vector<int>{1, 0}, std::vector<int>{0, 0});
  CHECK(std::isnan(empty[4]));
}

TEST_CASE("regime_stability examples") {
  auto swc = regime_stability({0.28, 1.43, 1.14, 1.71, 2.29}, 1.0);
  CHECK(std::abs(swc.mae - 0.66) <= 0.005);
  CHECK(std::abs(swc.max_dev - 1.29) <= 0.005);
  CHECK(std::abs(swc.std - 0.66) <= 0.005);
  auto zero = regime_stability({1, 1, 1, 1, 1}, 1.0);
  CHECK(zero.mae == 0.0);
  CHECK(zero.max_dev == 0.0);
  CHECK(zero.std == 0.0);
  auto offset = regime_stability({2, 2, 2, 2, 2}, 1.0);
  CHECK(offset.mae == 1.0);
  CHECK(offset.max_dev == 1.0);
  CHECK(offset.std == 0.0);
}

TEST_CASE("chi2_sf") {
  CHECK(chi2_sf(0.0, 1) == 1.0);
  CHECK(chi2_sf(0.0, 2) == 1.0);
  CHECK(chi2_sf(2 * std::log(2.0), 2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(chi2_sf(0.34, 1) - 0.5598) <= 0.001);
  CHECK(chi2_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(chi2_sf(13.815510557964274, 2) == doctest::Approx(0.001).epsilon(1e-10));
  for (int dof : {1, 2}) {
    double prev = 1.0;
    for (double x = 0.05; x < 50; x += 0.05) {
      double p = chi2_sf(x, dof);
      CHECK(p < prev);
      prev = p;
    }
  }
}

TEST_CASE("kupiec_uc examples") {
  auto base = kupiec_uc(1751, 93, 0.01);
  CHECK(std::abs(base.lr - 162.94) <= 0.02);
  CHECK(base.p == doctest::Approx(2.57e-37).epsilon(0.01));
  CHECK(format_pvalue(base.p) == "2.57e-37");
  auto aci = kupiec_uc(1751, 20, 0.01);
  CHECK(std::abs(aci.lr - 0.34) <= 0.01);
  CHECK(std::abs(aci.p - 0.559) <= 0.002);
  CHECK(format_pvalue(aci.p) == "0.559");
  CHECK(kupiec_uc(100, 1, 0.01).lr == 0.0);
  CHECK(kupiec_uc(100, 0, 0.01).lr == doctest::Approx(-2 * 100 * std::log(0.99)));
  CHECK(kupiec_uc(100, 100, 0.01).lr == doctest::Approx(-2 * 100 * std::log(0.01)));
  CHECK_THROWS_AS(kupiec_uc(10, 11, 0.01), Error);
  CHECK_THROWS_AS(kupiec_uc(0, 0, 0.01), Error);
}

TEST_CASE("kupiec LR grows with distance from n alpha") {
  const std::size_t n = 2000;
  const double alpha = 0.01;
  for (std::size_t x = 20; x < 200; ++x) CHECK(kupiec_uc(n, x + 1, alpha).lr > kupiec_uc(n, x, alpha).lr);
  for (std::size_t x = 20; x > 0; --x) CHECK(kupiec_uc(n, x - 1, alpha).lr > kupiec_uc(n, x, alpha).lr);
  for (std::size_t x = 0; x <= 200; ++x) CHECK(kupiec_uc(n, x, alpha).lr >= 0.0);
}

TEST_CASE("christoffersen examples") {
  auto zeros = christoffersen(std::vector<int>(100, 0), 0.01);
  CHECK(zeros.ind.lr == 0.0);
  CHECK(zeros.ind.p == 1.0);
  auto ones = christoffersen(std::vector<int>(100, 1), 0.01);
  CHECK(ones.ind.lr == 0.0);

  std::vector<int> x{0, 0, 1, 0, 0, 1, 0};
  auto c = christoffersen(x, 0.01);
  CHECK(c.ind.lr == doctest::Approx(oracle::christoffersen_ind(x)).epsilon(1e-12));
  auto t = transition_counts(x);
  CHECK(t.n00 == 2);
  CHECK(t.n01 == 2);
  CHECK(t.n10 == 2);
  CHECK(t.n11 == 0);

  double lr_cc = kupiec_uc(1751, 20, 0.01).lr + 0.46;
  CHECK(std::abs(lr_cc - 0.80) <= 0.01);
  CHECK(std::abs(chi2_sf(lr_cc, 2) - 0.669) <= 0.002);
  CHECK_THROWS_AS(christoffersen(std::vector<int>{1}, 0.01), Error);
}

TEST_CASE("christoffersen agrees with the likelihood oracle and is additive") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto x = bernoulli(50 + seed * 37, 0.02 + 0.01 * (seed % 7), seed);
    for (std::size_t i = 1; i + 1 < x.size() && seed % 3 == 0; i += 11) x[i + 1] = x[i];
    auto c = christoffersen(x, 0.01);
    CHECK(c.ind.lr == doctest::Approx(oracle::christoffersen_ind(x)).epsilon(1e-9).scale(1e-9));
    CHECK(std::abs(c.cc.lr - (c.uc.lr + c.ind.lr)) <= 1e-9);
    std::size_t count = 0;
    for (int v : x) count += v;
    CHECK(c.uc.lr == kupiec_uc(x.size(), count, 0.01).lr);
    CHECK(c.ind.lr >= 0.0);
    CHECK(c.cc.p == doctest::Approx(chi2_sf(c.cc.lr, 2)));
  }
}

TEST_CASE("percentile and weight diagnostics") {
  std::vector<double> xs{4, 1, 3, 2, NAN};
  CHECK(percentile(xs, 0.5) == 2.5);
  CHECK(percentile(xs, 0.0) == 1.0);
  CHECK(percentile(xs, 1.0) == 4.0);
  CHECK(percentile(xs, 0.1) == doctest::Approx(1.3));
  auto b = series_of(std::vector<int>(11, 0), std::vector<double>(11, 0.01));
  auto d = weight_diagnostics(b);
  CHECK(d.median_n_eff == 105.0);
  CHECK(d.p10_n_eff == 101.0);
  CHECK(d.median_tau == 55.0);
  CHECK(d.p90_tau == 59.0);
}

TEST_CASE("make_report invariants") {
  auto x = bernoulli(1751, 0.012, 8);
  std::vector<double> bounds(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) bounds[i] = 0.01 + 1e-5 * (i % 10);
  auto b = series_of(x, bounds);
  std::vector<int> labels(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) labels[i] = static_cast<int>(i * 5 / x.size());
  auto rep = make_report(b, labels, 0.01);
  CHECK(rep.n == 1751);
  CHECK(rep.exceedance_pct == doctest::Approx(100.0 * rep.exceed_count / rep.n).epsilon(1e-15));
  CHECK(std::abs(rep.cc.lr - (rep.uc.lr + rep.ind.lr)) <= 1e-9);
  CHECK(rep.uc.lr >= 0);
  CHECK(rep.ind.lr >= 0);
  CHECK(rep.rolling.size() == 1751 - 251);
  std::size_t total = 0;
  for (auto s : rep.quintile_sizes) total += s;
  CHECK(total == 1751);
  CHECK(format_pvalue(0.0004) == "4.00e-04");
  CHECK(format_pvalue(0.01) == "0.010");
}

TEST_CASE("constructed indicator streams reproduce the published backtest rows") {
  auto base = testing::clustered_indicators(1751, 93, 11);
  auto t = transition_counts(base);
  CHECK(t.n11 == 11);
  CHECK(t.n01 + t.n11 == 93);
  auto c = christoffersen(base, 0.01);
  CHECK(std::abs(c.uc.lr - 162.94) <= 0.02);
  CHECK(std::abs(c.ind.lr - 6.36) <= 0.01);
  CHECK(std::abs(c.cc.lr - 169.31) <= 0.02);

  auto aci = christoffersen(testing::clustered_indicators(1751, 20, 0), 0.01);
  CHECK(std::abs(aci.ind.lr - 0.46) <= 0.01);
  CHECK(std::abs(aci.cc.lr - 0.80) <= 0.01);
  CHECK(std::abs(aci.cc.p - 0.669) <= 0.002);
}
