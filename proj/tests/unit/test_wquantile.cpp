#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rwc/error.hpp"
#include "rwc/wquantile.hpp"

using namespace rwc;

namespace {

std::vector<double> uniform(std::size_t n) { return std::vector<double>(n, 1.0 / n); }

}  // namespace

TEST_CASE("weighted_quantile examples") {
  CHECK(weighted_quantile(std::vector<double>{5}, std::vector<double>{1}, 0.99) == 5);
  CHECK(weighted_quantile(std::vector<double>{1, 2, 3, 4}, uniform(4), 0.5) == 2);
  CHECK(oracle::weighted_quantile({1, 2, 3, 4}, uniform(4), 0.5) == 2);
  CHECK(weighted_quantile(std::vector<double>{1, 2, 3}, std::vector<double>{0.1, 0.1, 0.8}, 0.25) == 3);
  CHECK(oracle::weighted_quantile({1, 2, 3}, {0.1, 0.1, 0.8}, 0.25) == 3);
  try {
    weighted_quantile(std::vector<double>{}, std::vector<double>{}, 0.5);
    FAIL("expected EmptyInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyInput);
  }
}

TEST_CASE("ties merge their weight before the cumulative test") {
  std::vector<double> v{2, 1, 2, 3};
  std::vector<double> w{0.2, 0.3, 0.2, 0.3};
  CHECK(weighted_quantile(v, w, 0.7) == 2);
  CHECK(weighted_quantile(v, w, 0.71) == 3);
  CHECK(weighted_quantile(v, w, 1.0) == 3);
  std::vector<double> zero_tail{1, 2, 9};
  CHECK(weighted_quantile(zero_tail, std::vector<double>{0.5, 0.5, 0.0}, 1.0) == 2);
}

TEST_CASE("inflated_level examples") {
  CHECK(std::abs(inflated_level(0.01, 1e12, 1.0) - 0.99) < 1e-9);
  CHECK(inflated_level(0.1, 19, 1) == doctest::Approx(0.9 * 20 / 19).epsilon(1e-14));
  CHECK(inflated_level(0.1, 19, 1) == doctest::Approx(0.94737).epsilon(1e-5));
  CHECK(inflated_level(0.01, 50, 1) == 1.0);
  CHECK(inflated_level(0.2, 10, 0) == doctest::Approx(0.8));
}

TEST_CASE("conformal_threshold examples") {
  std::vector<double> s(252);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (double& x : s) x = nd(rng);
  auto sorted = s;
  std::sort(sorted.begin(), sorted.end());
  auto w = uniform(252);

  CHECK(conformal_threshold(s, w, 0.01, false, 252.0) == sorted[249]);
  CHECK(oracle::weighted_quantile(s, w, 0.99) == sorted[249]);
  CHECK(inflated_level(0.01, 252.0, 1.0) == doctest::Approx(0.99393).epsilon(1e-5));
  CHECK(conformal_threshold(s, w, 0.01, true, 252.0) == sorted[250]);
  CHECK(oracle::weighted_quantile(s, w, inflated_level(0.01, 252.0, 1.0)) == sorted[250]);

  auto w50 = uniform(50);
  std::vector<double> s50(s.begin(), s.begin() + 50);
  CHECK(conformal_threshold(s50, w50, 0.01, true, 50.0) == *std::max_element(s50.begin(), s50.end()));
}

TEST_CASE("conformal_pvalue examples") {
  std::vector<double> s{1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<double> ones(9, 1.0);
  CHECK(conformal_pvalue(s, ones, 100.0, 1.0, 0.5) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(conformal_pvalue(s, ones, -100.0, 1.0, 1.0) == 1.0);
  double p0 = conformal_pvalue(s, ones, 100.0, 1.0, 0.0);
  CHECK(p0 >= 0.0);
  CHECK(p0 < 1e-12);
  double prev = 2.0;
  for (double t = -1; t <= 11; t += 0.5) {
    double p = conformal_pvalue(s, ones, t, 1.0, 0.3);
    CHECK(p <= prev);
    prev = p;
  }
}

TEST_CASE("uniform weights match the higher empirical quantile exhaustively for n <= 8") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> small(0, 5);
  std::normal_distribution<double> nd;
  std::size_t mismatches = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    for (int rep = 0; rep < 40; ++rep) {
      std::vector<double> v(n);
      for (double& x : v) x = rep % 2 ? small(rng) : nd(rng);
      auto w = uniform(n);
      for (int g = 1; g <= 100; ++g) {
        double gamma = g / 100.0;
        double got = weighted_quantile(v, w, gamma);
        if (got != oracle::higher_quantile_percent(v, g)) ++mismatches;
        if (got != oracle::weighted_quantile(v, w, gamma)) ++mismatches;
        if (got != empirical_quantile_higher(v, gamma)) ++mismatches;
      }
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("random weights agree with the brute-force oracle") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> ud;
  std::uniform_int_distribution<int> small(0, 4);
  for (int rep = 0; rep < 2000; ++rep) {
    std::size_t n = 1 + rng() % 12;
    std::vector<double> v(n), w(n);
    double tot = 0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = rep % 3 == 0 ? small(rng) : ud(rng);
      w[i] = rep % 5 == 0 && i % 2 ? 0.0 : ud(rng);
      tot += w[i];
    }
    if (tot == 0) continue;
    for (double& x : w) x /= tot;
    double gamma = ud(rng);
    CHECK(weighted_quantile(v, w, gamma) == oracle::weighted_quantile(v, w, gamma));
  }
}

TEST_CASE("weighted_quantile monotonicity and equivariance") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ud;
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 300; ++rep) {
    std::size_t n = 1 + rng() % 20;
    std::vector<double> v(n), w(n);
    double tot = 0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = std::ldexp(std::round(nd(rng) * 64), -6);
      w[i] = ud(rng);
      tot += w[i];
    }
    for (double& x : w) x /= tot;
    double prev = -INFINITY;
    for (int g = 1; g <= 100; ++g) {
      double q = weighted_quantile(v, w, g / 100.0);
      CHECK(q >= prev);
      prev = q;
    }
    double gamma = ud(rng);
    double q = weighted_quantile(v, w, gamma);

    auto bumped = v;
    bumped[rng() % n] += 0.5;
    CHECK(weighted_quantile(bumped, w, gamma) >= q);

    auto shifted = v;
    for (double& x : shifted) x += 3.0;
    CHECK(weighted_quantile(shifted, w, gamma) == q + 3.0);

    auto scaled = v;
    for (double& x : scaled) x *= 2.5;
    CHECK(weighted_quantile(scaled, w, gamma) == q * 2.5);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> pv(n), pw(n);
    for (std::size_t i = 0; i < n; ++i) pv[i] = v[perm[i]], pw[i] = w[perm[i]];
    CHECK(weighted_quantile(pv, pw, gamma) == q);
  }
}

TEST_CASE("p-values are super-uniform under exchangeability") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud;
  const int reps = 10000;
  const std::size_t n = 49;
  std::vector<double> ones(n, 1.0);
  std::vector<double> pvals;
  for (int r = 0; r < reps; ++r) {
    std::vector<double> s(n);
    for (double& x : s) x = nd(rng);
    pvals.push_back(conformal_pvalue(s, ones, nd(rng), 1.0, ud(rng)));
  }
  for (int d = 1; d <= 9; ++d) {
    double a = d / 10.0;
    double frac = std::count_if(pvals.begin(), pvals.end(), [&](double p) { return p <= a; }) / double(reps);
    double se = std::sqrt(a * (1 - a) / reps);
    CHECK(frac <= a + 3 * se);
  }
}
