#pragma once
// Independent reference computations used by the tests. Nothing here calls
// into the library's numeric routines.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <set>
#include <vector>

namespace rwc::oracle {

/// Weighted quantile straight from the CDF definition: evaluate
/// F(q) = sum_i w_i 1{v_i <= q} at every candidate and keep the smallest q
/// with F(q) >= gamma (within the same 1e-12 mass slack the contract allows).
inline double weighted_quantile(const std::vector<double>& v, const std::vector<double>& w, double gamma) {
  double best = 0.0;
  bool found = false;
  double max_positive = -INFINITY;
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (w[c] > 0.0) max_positive = std::max(max_positive, v[c]);
    double cdf = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] <= v[c]) cdf += w[i];
    if (cdf >= gamma - 1e-12 && (!found || v[c] < best)) {
      best = v[c];
      found = true;
    }
  }
  return found ? best : max_positive;
}

/// Order statistic at rank ceil(g * n / 100) for an integer percent level g.
inline double higher_quantile_percent(std::vector<double> v, int g) {
  std::sort(v.begin(), v.end());
  const long n = static_cast<long>(v.size());
  long k = (g * n + 99) / 100;
  k = std::clamp(k, 1L, n);
  return v[static_cast<std::size_t>(k - 1)];
}

/// Two-pass sample standard deviation in long double.
inline double sample_std(const std::vector<double>& xs) {
  long double mean = 0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  long double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return static_cast<double>(std::sqrt(ss / (xs.size() - 1)));
}

struct GeometricDiag {
  double n_eff;
  double tau;
};

/// Closed forms for weights r^k, k = 1..m, r = exp(-lambda).
inline GeometricDiag truncated_geometric(double lambda, std::size_t m) {
  const long double r = std::exp(-static_cast<long double>(lambda));
  const long double M = static_cast<long double>(m);
  if (lambda == 0.0) return {static_cast<double>(m), static_cast<double>((M + 1) / 2)};
  const long double s1 = r * (1 - std::pow(r, M)) / (1 - r);
  const long double s2 = r * r * (1 - std::pow(r, 2 * M)) / (1 - r * r);
  const long double sk = r * (1 - (M + 1) * std::pow(r, M) + M * std::pow(r, M + 1)) / ((1 - r) * (1 - r));
  return {static_cast<double>(s1 * s1 / s2), static_cast<double>(sk / s1)};
}

/// Same quantities by direct summation.
inline GeometricDiag direct_sum(double lambda, std::size_t m) {
  long double s1 = 0, s2 = 0, sk = 0;
  for (std::size_t k = 1; k <= m; ++k) {
    const long double w = std::exp(-static_cast<long double>(lambda) * k);
    s1 += w;
    s2 += w * w;
    sk += w * k;
  }
  return {static_cast<double>(s1 * s1 / s2), static_cast<double>(sk / s1)};
}

/// Christoffersen LR_ind by multiplying the per-transition likelihoods of the
/// fitted Markov and i.i.d. models along the sequence.
inline double christoffersen_ind(const std::vector<int>& x) {
  double c[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 1; i < x.size(); ++i) c[x[i - 1]][x[i]] += 1;
  const double p01 = (c[0][0] + c[0][1]) > 0 ? c[0][1] / (c[0][0] + c[0][1]) : 0.0;
  const double p11 = (c[1][0] + c[1][1]) > 0 ? c[1][1] / (c[1][0] + c[1][1]) : 0.0;
  const double p = (c[0][1] + c[1][1]) / (x.size() - 1);
  long double l_markov = 1, l_iid = 1;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double pm = x[i - 1] == 0 ? p01 : p11;
    l_markov *= x[i] ? pm : 1 - pm;
    l_iid *= x[i] ? p : 1 - p;
  }
  return static_cast<double>(2 * (std::log(l_markov) - std::log(l_iid)));
}

/// NYSE trading days from holiday rules (plus the one-off closures in
/// 1990-2024).
inline std::vector<std::chrono::year_month_day> nyse_calendar(std::chrono::year_month_day from,
                                                               std::chrono::year_month_day to) {
  using namespace std::chrono;
  auto nth = [](int y, unsigned m, weekday wd, unsigned n) {
    return year_month_day{sys_days{year{y} / month{m} / wd[n]}};
  };
  auto last = [](int y, unsigned m, weekday wd) {
    return year_month_day{sys_days{year{y} / month{m} / wd[std::chrono::last]}};
  };
  auto observed = [](year_month_day d) {
    const weekday wd{sys_days{d}};
    if (wd == Saturday) return year_month_day{sys_days{d} - days{1}};
    if (wd == Sunday) return year_month_day{sys_days{d} + days{1}};
    return d;
  };
  auto easter = [](int y) {
    const int a = y % 19, b = y / 100, c = y % 100, d = b / 4, e = b % 4, f = (b + 8) / 25, g = (b - f + 1) / 3,
              h = (19 * a + b - d - g + 15) % 30, i = c / 4, k = c % 4, l = (32 + 2 * e + 2 * i - h - k) % 7,
              m = (a + 11 * h + 22 * l) / 451;
    const int month_ = (h + l - 7 * m + 114) / 31, day_ = ((h + l - 7 * m + 114) % 31) + 1;
    return year_month_day{year{y}, month{static_cast<unsigned>(month_)}, day{static_cast<unsigned>(day_)}};
  };

  std::set<sys_days> closed;
  for (int y = static_cast<int>(from.year()) - 1; y <= static_cast<int>(to.year()) + 1; ++y) {
    const year_month_day ny{year{y}, January, day{1}};
    const weekday nwd{sys_days{ny}};
    if (nwd == Sunday) closed.insert(sys_days{ny} + days{1});
    else if (nwd != Saturday) closed.insert(sys_days{ny});
    if (y >= 1998) closed.insert(sys_days{nth(y, 1, Monday, 3)});
    closed.insert(sys_days{nth(y, 2, Monday, 3)});
    closed.insert(sys_days{easter(y)} - days{2});
    closed.insert(sys_days{last(y, 5, Monday)});
    if (y >= 2022) closed.insert(sys_days{observed({year{y}, June, day{19}})});
    closed.insert(sys_days{observed({year{y}, July, day{4}})});
    closed.insert(sys_days{nth(y, 9, Monday, 1)});
    closed.insert(sys_days{nth(y, 11, Thursday, 4)});
    closed.insert(sys_days{observed({year{y}, December, day{25}})});
  }
  for (auto d : {year{1994} / April / 27, year{2001} / September / 11, year{2001} / September / 12,
                 year{2001} / September / 13, year{2001} / September / 14, year{2004} / June / 11,
                 year{2007} / January / 2, year{2012} / October / 29, year{2012} / October / 30,
                 year{2018} / December / 5})
    closed.insert(sys_days{d});

  std::vector<year_month_day> out;
  for (sys_days d{from}; d <= sys_days{to}; d += days{1}) {
    const weekday wd{d};
    if (wd == Saturday || wd == Sunday || closed.count(d)) continue;
    out.emplace_back(d);
  }
  return out;
}

}  // namespace rwc::oracle
