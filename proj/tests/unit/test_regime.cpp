#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "rwc/error.hpp"
#include "rwc/regime.hpp"
#include "rwc/synth.hpp"

using namespace rwc;

TEST_CASE("rv21 examples") {
  std::vector<double> flat(22, 0.01);
  CHECK(rv21(flat, 21) == 0.0);

  std::vector<double> alt(30);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? -0.01 : 0.01;
  std::vector<double> window(alt.begin() + 4, alt.begin() + 25);
  CHECK(rv21(alt, 25) == doctest::Approx(std::sqrt(252.0) * oracle::sample_std(window)).epsilon(1e-13));

  std::vector<double> doubled(alt);
  for (double& x : doubled) x *= 2;
  CHECK(rv21(doubled, 25) == doctest::Approx(2 * rv21(alt, 25)).epsilon(1e-14));

  CHECK_THROWS_AS(rv21(alt, 20), Error);
}

TEST_CASE("mar5 examples") {
  std::vector<double> r{0.5, 0.01, -0.01, 0.02, 0.0, -0.02, 7.0};
  CHECK(mar5(r, 6) == doctest::Approx(0.012).epsilon(1e-14));
  std::vector<double> flipped(r);
  for (double& x : flipped) x = -x;
  CHECK(mar5(flipped, 6) == mar5(r, 6));
  CHECK(mar5(std::vector<double>(6, 0.0), 5) == 0.0);
  CHECK_THROWS_AS(mar5(r, 4), Error);
}

TEST_CASE("fit_standardizer examples") {
  std::vector<RegimePoint> raw{{1, 1}, {3, 3}};
  auto st = fit_standardizer(raw, {0, 2});
  CHECK(st.mean[0] == doctest::Approx(2.0));
  CHECK(st.mean[1] == doctest::Approx(2.0));
  CHECK(st.std[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(st.std[1] == doctest::Approx(std::sqrt(2.0)));

  std::vector<RegimePoint> z;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 50; ++i) z.push_back({nd(rng), nd(rng)});
  auto s1 = fit_standardizer(z, {0, z.size()});
  std::vector<RegimePoint> zz;
  for (auto& p : z) zz.push_back(s1.apply(p));
  auto s2 = fit_standardizer(zz, {0, zz.size()});
  for (int k = 0; k < 2; ++k) {
    CHECK(std::abs(s2.mean[k]) < 1e-10);
    CHECK(std::abs(s2.std[k] - 1.0) < 1e-10);
    CHECK(std::abs(s2.apply(zz[7])[k] - zz[7][k]) < 1e-10);
  }

  std::vector<RegimePoint> constant{{1, 2}, {1, 3}, {1, 4}};
  try {
    fit_standardizer(constant, {0, 3});
    FAIL("expected DegenerateFeature");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateFeature);
  }
}

TEST_CASE("assign_vol_quintiles examples") {
  std::vector<double> rv(1751);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ud;
  for (double& x : rv) x = ud(rng);
  auto labels = assign_vol_quintiles(rv);
  std::array<int, 5> counts{};
  for (int l : labels) ++counts[l];
  CHECK(counts == std::array<int, 5>{351, 350, 350, 350, 350});

  CHECK(assign_vol_quintiles(std::vector<double>{1, 2, 3, 4, 5}) == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(assign_vol_quintiles(std::vector<double>(10, 0.2)) == std::vector<int>{0, 0, 1, 1, 2, 2, 3, 3, 4, 4});
}

TEST_CASE("quintile buckets partition and are ordered") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> level(0, 6);
  for (std::size_t n : {5u, 7u, 23u, 101u, 1000u}) {
    std::vector<double> rv(n);
    for (double& x : rv) x = level(rng);
    auto labels = assign_vol_quintiles(rv);
    std::array<std::size_t, 5> counts{};
    std::array<double, 5> lo, hi;
    lo.fill(INFINITY);
    hi.fill(-INFINITY);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[labels[i]];
      lo[labels[i]] = std::min(lo[labels[i]], rv[i]);
      hi[labels[i]] = std::max(hi[labels[i]], rv[i]);
    }
    auto [mn, mx] = std::minmax_element(counts.begin(), counts.end());
    CHECK(*mx - *mn <= 1);
    CHECK(std::accumulate(counts.begin(), counts.end(), std::size_t{0}) == n);
    for (int b = 0; b + 1 < 5; ++b) CHECK(hi[b] <= lo[b + 1]);
  }
}

TEST_CASE("embedding is causal") {
  auto sim = simulate(default_two_state_model(300, 4));
  auto base = raw_embedding(sim.returns.returns);
  for (std::size_t t : {30u, 100u, 250u}) {
    auto r = sim.returns.returns;
    r[t] += 0.5;
    auto pert = raw_embedding(r);
    for (std::size_t i = 0; i <= t; ++i) {
      if (i < kEmbeddingWarmup) {
        CHECK(std::isnan(pert[i][0]));
        continue;
      }
      CHECK(pert[i][0] == base[i][0]);
      CHECK(pert[i][1] == base[i][1]);
    }
    CHECK(pert[t + 1][0] != base[t + 1][0]);
    CHECK(pert[t + 1][1] != base[t + 1][1]);
  }
}

TEST_CASE("standardize then invert recovers raw features") {
  auto sim = simulate(default_two_state_model(400, 5));
  auto emb = build_embedding(sim.returns, {0, 300});
  CHECK(emb.valid_from == kEmbeddingWarmup);
  CHECK(emb.stats.source_range == IndexRange{kEmbeddingWarmup, 300});
  for (std::size_t t = emb.valid_from; t < emb.size(); ++t) {
    auto back = emb.stats.invert(emb.standardized[t]);
    CHECK(std::abs(back[0] - emb.raw[t][0]) < 1e-10);
    CHECK(std::abs(back[1] - emb.raw[t][1]) < 1e-10);
  }
  RegimePoint mean{0, 0};
  for (std::size_t t = 21; t < 300; ++t)
    for (int k = 0; k < 2; ++k) mean[k] += emb.standardized[t][k];
  CHECK(std::abs(mean[0] / 279) < 1e-10);
  CHECK(std::abs(mean[1] / 279) < 1e-10);
  CHECK(parse_standardize_on("train") == StandardizeOn::Train);
  CHECK(to_string(StandardizeOn::Pretest) == "pretest");
}
