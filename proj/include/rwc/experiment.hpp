#pragma once

#include <exception>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rwc/pipeline.hpp"
#include "rwc/report.hpp"
#include "rwc/tuning.hpp"

namespace rwc {

/// Flat key/value experiment description. One `key = value` per line; blank
/// lines and lines starting with '#' are ignored. Later assignments win.
class Manifest {
 public:
  static Manifest parse(std::string_view text);
  static Manifest load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Manifest resolved into typed settings.
struct Experiment {
  std::filesystem::path data;
  std::string date_col = "date";
  std::string return_col = "ret";
  SplitConfig split;
  double alpha = 0.01;
  std::vector<Method> methods;
  ForecastOptions forecast;
  StandardizeOn standardize_on = StandardizeOn::Pretest;
  std::filesystem::path output;
  std::uint64_t seed = 0;
  std::map<Method, RunConfig> configs;
};

Experiment resolve(const Manifest& manifest);

/// Writes bounds_<method>.csv, report_<method>.json, table1/2/3/5.csv,
/// table3_weights.csv, rolling_<base>.csv and manifest.lock.json.
void cmd_run(const Manifest& manifest);

/// Writes tune_<method>.csv per method and tuned.json with the selections.
void cmd_tune(const Manifest& manifest, const GridSpec& grid);

/// RWC at fixed (m, lambda) for each bandwidth; writes table4.csv.
std::vector<io::SweepRow> cmd_sweep_bandwidth(const Manifest& manifest, const std::vector<double>& bandwidths);

/// Rebuilds reports and tables from an existing run directory.
void cmd_report(const std::filesystem::path& dir);

/// 0 success, 2 configuration, 3 data, 4 numeric failure.
int exit_code_for(const std::exception& e);

/// Parses a comma list of bandwidths; "inf" is accepted.
std::vector<double> parse_bandwidths(std::string_view text);

}  // namespace rwc
