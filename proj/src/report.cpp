#include "rwc/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "rwc/error.hpp"

namespace rwc::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path.string());
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan" || s.empty()) return std::nan("");
  return std::stod(s);
}

std::string h_label(double h) { return std::isinf(h) ? "inf" : full(h); }

}  // namespace

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string full(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_bounds_csv(const std::filesystem::path& path, const BoundSeries& b) {
  auto out = open_out(path);
  out << "date,qhat,chat,U,loss,exceed,n_eff,tau,fallback,alpha_t\n";
  for (const auto& r : b.records) {
    out << format_date(r.date) << ',' << full(r.qhat) << ',' << full(r.chat) << ',' << full(r.bound) << ','
        << full(r.loss) << ',' << (r.exceed ? 1 : 0) << ',' << full(r.n_eff) << ',' << full(r.tau) << ','
        << (r.fallback ? 1 : 0) << ',' << full(r.alpha_t) << '\n';
  }
}

BoundSeries read_bounds_csv(const std::filesystem::path& path, std::span<const Date> dates,
                            const std::string& label) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyFile, path.string());
  const auto header = csv::split_line(line);
  const std::vector<std::string> expected{"date", "qhat", "chat", "U", "loss", "exceed", "n_eff", "tau", "fallback", "alpha_t"};
  if (header != expected) throw Error(ErrorCode::MissingColumn, path.string() + ": unexpected bounds header");

  BoundSeries b;
  b.label = label;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = csv::split_line(line);
    const auto date = f.size() == expected.size() ? parse_date(f[0]) : std::nullopt;
    if (!date) throw Error(ErrorCode::UnparseableRow, path.string() + ":" + std::to_string(line_no));
    auto it = std::lower_bound(dates.begin(), dates.end(), *date);
    if (it == dates.end() || *it != *date) throw Error(ErrorCode::DateMismatch, format_date(*date));
    BoundRecord r;
    r.index = static_cast<std::size_t>(it - dates.begin());
    r.date = *date;
    try {
      r.qhat = parse_double(f[1]);
      r.chat = parse_double(f[2]);
      r.bound = parse_double(f[3]);
      r.loss = parse_double(f[4]);
      r.exceed = f[5] == "1";
      r.n_eff = parse_double(f[6]);
      r.tau = parse_double(f[7]);
      r.fallback = f[8] == "1";
      r.alpha_t = parse_double(f[9]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::UnparseableRow, path.string() + ":" + std::to_string(line_no));
    }
    b.records.push_back(r);
  }
  return b;
}

std::string report_json(const BacktestReport& r, double alpha) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["alpha"] = alpha;
  j["n"] = r.n;
  j["exceed_count"] = r.exceed_count;
  j["exceedance_pct"] = r.exceedance_pct;
  j["avg_var_bps"] = r.avg_var_bps;
  j["lr_uc"] = r.uc.lr;
  j["p_uc"] = r.uc.p;
  j["lr_ind"] = r.ind.lr;
  j["p_ind"] = r.ind.p;
  j["lr_cc"] = r.cc.lr;
  j["p_cc"] = r.cc.p;
  j["per_quintile_pct"] = r.per_quintile_pct;
  j["quintile_sizes"] = r.quintile_sizes;
  j["reg_mae_pp"] = r.stability.mae;
  j["reg_maxdev_pp"] = r.stability.max_dev;
  j["reg_std_pp"] = r.stability.std;
  j["weight_diag"] = {{"median_n_eff", r.weight_diag.median_n_eff},
                      {"p10_n_eff", r.weight_diag.p10_n_eff},
                      {"median_tau", r.weight_diag.median_tau},
                      {"p90_tau", r.weight_diag.p90_tau}};
  j["fallback_steps"] = r.fallback_steps;
  auto& rolling = j["rolling"] = nlohmann::ordered_json::array();
  for (const auto& p : r.rolling) rolling.push_back({{"date", format_date(p.date)}, {"rate", p.rate}});
  return j.dump(2);
}

void write_report_json(const std::filesystem::path& path, const BacktestReport& r, double alpha) {
  auto out = open_out(path);
  out << report_json(r, alpha) << '\n';
}

void write_table1(const std::filesystem::path& path, std::span<const NamedReport> reports) {
  auto out = open_out(path);
  out << "method,exceedance_pct,avg_var_bps\n";
  for (const auto& nr : reports)
    out << nr.name << ',' << fixed(nr.report.exceedance_pct, 2) << ',' << fixed(nr.report.avg_var_bps, 0) << '\n';
}

void write_table2(const std::filesystem::path& path, std::span<const NamedReport> reports) {
  auto out = open_out(path);
  out << "vol_quintile,n";
  for (const auto& nr : reports) out << ',' << nr.name;
  out << '\n';
  for (std::size_t k = 0; k < 5; ++k) {
    out << k << ',' << (reports.empty() ? 0 : reports.front().report.quintile_sizes[k]);
    for (const auto& nr : reports) out << ',' << fixed(nr.report.per_quintile_pct[k], 2);
    out << '\n';
  }
}

void write_table3(const std::filesystem::path& path, std::span<const NamedReport> reports) {
  auto out = open_out(path);
  out << "method,reg_mae_pp,reg_maxdev_pp,reg_std_pp\n";
  for (const auto& nr : reports)
    out << nr.name << ',' << fixed(nr.report.stability.mae, 2) << ',' << fixed(nr.report.stability.max_dev, 2)
        << ',' << fixed(nr.report.stability.std, 2) << '\n';
}

void write_weight_diagnostics(const std::filesystem::path& path, std::span<const NamedReport> reports) {
  auto out = open_out(path);
  out << "m,method,median_n_eff,p10_n_eff,median_tau,p90_tau\n";
  for (const auto& nr : reports) {
    const auto& w = nr.report.weight_diag;
    out << nr.m << ',' << nr.name << ',' << fixed(w.median_n_eff, 1) << ',' << fixed(w.p10_n_eff, 1) << ','
        << fixed(w.median_tau, 1) << ',' << fixed(w.p90_tau, 1) << '\n';
  }
}

void write_table5(const std::filesystem::path& path, std::span<const NamedReport> reports) {
  auto out = open_out(path);
  out << "method,exceedance_pct,avg_var_bps,n,exc,lr_uc,p_uc,lr_ind,p_ind,lr_cc,p_cc\n";
  for (const auto& nr : reports) {
    const auto& r = nr.report;
    out << nr.name << ',' << fixed(r.exceedance_pct, 2) << ',' << fixed(r.avg_var_bps, 0) << ',' << r.n << ','
        << r.exceed_count << ',' << fixed(r.uc.lr, 2) << ',' << format_pvalue(r.uc.p) << ',' << fixed(r.ind.lr, 2)
        << ',' << format_pvalue(r.ind.p) << ',' << fixed(r.cc.lr, 2) << ',' << format_pvalue(r.cc.p) << '\n';
  }
}

void write_rolling(const std::filesystem::path& path, std::span<const NamedReport> reports) {
  auto out = open_out(path);
  out << "date,method,rate\n";
  for (const auto& nr : reports)
    for (const auto& p : nr.report.rolling) out << format_date(p.date) << ',' << nr.name << ',' << full(p.rate) << '\n';
}

void write_tune_table(const std::filesystem::path& path, const TuneResult& result) {
  auto out = open_out(path);
  out << "method,m,lambda,h,gamma,val_exceedance,val_rollmax,objective,selected\n";
  for (std::size_t i = 0; i < result.candidates.size(); ++i) {
    const auto& c = result.candidates[i];
    out << to_string(c.candidate.method) << ',' << c.candidate.m << ',' << full(c.candidate.lambda) << ','
        << h_label(c.candidate.h) << ',' << full(c.candidate.gamma) << ',' << full(c.val_exceedance) << ','
        << full(c.val_rollmax) << ',' << full(c.objective) << ',' << (i == result.selected ? 1 : 0) << '\n';
  }
}

void write_sweep_table(const std::filesystem::path& path, std::span<const SweepRow> rows) {
  auto out = open_out(path);
  out << "h,exceedance_pct,avg_var_bps,top_vol_exceedance_pct,median_n_eff,p10_n_eff,fallback_steps\n";
  for (const auto& r : rows)
    out << h_label(r.h) << ',' << fixed(r.exceedance_pct, 2) << ',' << fixed(r.avg_var_bps, 0) << ','
        << fixed(r.top_vol_exceedance_pct, 2) << ',' << fixed(r.median_n_eff, 1) << ',' << fixed(r.p10_n_eff, 1)
        << ',' << r.fallback_steps << '\n';
}

}  // namespace rwc::io
