#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rwc/calibrators.hpp"
#include "rwc/evaluation.hpp"
#include "rwc/tuning.hpp"

namespace rwc::io {

/// Columns: date,qhat,chat,U,loss,exceed,n_eff,tau,fallback,alpha_t.
void write_bounds_csv(const std::filesystem::path& path, const BoundSeries& b);
/// Reads a bounds CSV. Record indices are resolved against `dates`.
BoundSeries read_bounds_csv(const std::filesystem::path& path, std::span<const Date> dates,
                            const std::string& label);

std::string report_json(const BacktestReport& r, double alpha);
void write_report_json(const std::filesystem::path& path, const BacktestReport& r, double alpha);

struct NamedReport {
  std::string name;
  std::size_t m = 0;
  BacktestReport report;
};

/// method, exceedance (%), avg VaR (bps)
void write_table1(const std::filesystem::path& path, std::span<const NamedReport> reports);
/// quintile, n, one column per method
void write_table2(const std::filesystem::path& path, std::span<const NamedReport> reports);
/// method, Reg-MAE, Reg-MaxDev, Reg-Std (pp)
void write_table3(const std::filesystem::path& path, std::span<const NamedReport> reports);
/// m, method, med/p10 n_eff, med/p90 tau
void write_weight_diagnostics(const std::filesystem::path& path, std::span<const NamedReport> reports);
/// method, exceedance, avg VaR, N, Exc, LR/p for UC, IND, CC
void write_table5(const std::filesystem::path& path, std::span<const NamedReport> reports);
/// Long format: date,method,rate
void write_rolling(const std::filesystem::path& path, std::span<const NamedReport> reports);

void write_tune_table(const std::filesystem::path& path, const TuneResult& result);

struct SweepRow {
  double h = 0.0;
  double exceedance_pct = 0.0;
  double avg_var_bps = 0.0;
  double top_vol_exceedance_pct = 0.0;
  double median_n_eff = 0.0;
  double p10_n_eff = 0.0;
  std::size_t fallback_steps = 0;
};
void write_sweep_table(const std::filesystem::path& path, std::span<const SweepRow> rows);

/// Fixed-point with `digits` decimals; NaN prints as "nan".
std::string fixed(double v, int digits);
/// Round-trip precision.
std::string full(double v);

}  // namespace rwc::io
