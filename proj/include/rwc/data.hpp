#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rwc {

using Date = std::chrono::year_month_day;

/// Parses `YYYY-MM-DD`. Returns nullopt on malformed or invalid dates.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);

/// Half-open index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool empty() const noexcept { return end <= begin; }
  bool contains(std::size_t i) const noexcept { return i >= begin && i < end; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct ReturnSeries {
  std::vector<Date> dates;
  std::vector<double> returns;

  std::size_t size() const noexcept { return returns.size(); }
};

struct LossSeries {
  std::vector<Date> dates;
  std::vector<double> losses;

  std::size_t size() const noexcept { return losses.size(); }
};

/// Both boundaries are inclusive: train is [first, train_end], validation is
/// (train_end, val_end], test is (val_end, last].
struct SplitConfig {
  Date train_end;
  Date val_end;
};

struct SplitRanges {
  IndexRange train;
  IndexRange val;
  IndexRange test;

  IndexRange pretest() const noexcept { return {train.begin, val.end}; }
};

enum class Method { SWC, TWC, RWC, ACI };
enum class BaseKind { HS, GBDT, External };

std::string_view to_string(Method m);
std::string_view to_string(BaseKind b);
Method parse_method(std::string_view text);
BaseKind parse_base(std::string_view text);

inline constexpr double kInfiniteBandwidth = std::numeric_limits<double>::infinity();

struct RunConfig {
  double alpha = 0.01;
  std::size_t m = 252;
  double lambda = 0.0;
  double h = kInfiniteBandwidth;
  std::size_t n_min = 0;  // 0 disables the ESS safeguard
  bool finite_sample_correction = false;
  double aci_gamma = 0.005;
  double aci_alpha_min = 1e-4;
  double aci_alpha_max = 0.2;
  BaseKind base = BaseKind::HS;
  Method calibrator = Method::RWC;
  std::uint64_t rng_seed = 0;

  /// Throws Error(InvalidConfig) if any field is out of range.
  void validate() const;
};

/// Reads a header-bearing CSV with ISO-8601 dates. Rows may appear in any
/// order on disk; the result is sorted by date.
ReturnSeries load_returns_csv(const std::filesystem::path& path,
                              std::string_view date_column = "date",
                              std::string_view return_column = "ret");

void write_returns_csv(const std::filesystem::path& path, const ReturnSeries& rs,
                       std::string_view date_column = "date",
                       std::string_view return_column = "ret");

LossSeries to_losses(const ReturnSeries& rs);
/// Inverse of to_losses.
ReturnSeries to_returns(const LossSeries& ls);

SplitRanges split(std::span<const Date> dates, const SplitConfig& cfg);
inline SplitRanges split(const LossSeries& series, const SplitConfig& cfg) {
  return split(series.dates, cfg);
}

namespace csv {
/// Splits one CSV line on commas, trimming surrounding whitespace and a
/// trailing carriage return. Quoted fields are not supported.
std::vector<std::string> split_line(std::string_view line);
}  // namespace csv

}  // namespace rwc
