#include "rwc/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "rwc/error.hpp"

namespace rwc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::size_t find_column(const std::vector<std::string>& header, std::string_view name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorCode::MissingColumn, std::string(name));
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

namespace csv {
std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}
}  // namespace csv

std::optional<Date> parse_date(std::string_view text) {
  text = trim(text);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned mo = 0, d = 0;
  if (!parse_number(text.substr(0, 4), y) || !parse_number(text.substr(5, 2), mo) ||
      !parse_number(text.substr(8, 2), d))
    return std::nullopt;
  Date date{std::chrono::year{y}, std::chrono::month{mo}, std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::SWC: return "swc";
    case Method::TWC: return "twc";
    case Method::RWC: return "rwc";
    case Method::ACI: return "aci";
  }
  return "?";
}

std::string_view to_string(BaseKind b) {
  switch (b) {
    case BaseKind::HS: return "hs";
    case BaseKind::GBDT: return "gbdt";
    case BaseKind::External: return "external";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  std::string s(trim(text));
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  for (Method m : {Method::SWC, Method::TWC, Method::RWC, Method::ACI})
    if (s == to_string(m)) return m;
  throw Error(ErrorCode::InvalidConfig, "unknown calibrator '" + std::string(text) + "'");
}

BaseKind parse_base(std::string_view text) {
  std::string s(trim(text));
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  for (BaseKind b : {BaseKind::HS, BaseKind::GBDT, BaseKind::External})
    if (s == to_string(b)) return b;
  throw Error(ErrorCode::InvalidConfig, "unknown base forecaster '" + std::string(text) + "'");
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0,1)");
  if (m == 0) fail("m must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda must be finite and >= 0");
  if (!(h > 0.0)) fail("h must be > 0 (inf allowed)");
  if (!(aci_gamma >= 0.0)) fail("aci_gamma must be >= 0");
  if (!(aci_alpha_min <= alpha && alpha <= aci_alpha_max)) fail("need alpha_min <= alpha <= alpha_max");
  if (!(aci_alpha_min > 0.0 && aci_alpha_max < 1.0)) fail("ACI clip range must lie in (0,1)");
}

ReturnSeries load_returns_csv(const std::filesystem::path& path, std::string_view date_column,
                              std::string_view return_column) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = csv::split_line(line);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorCode::EmptyFile, path.string());
  const std::size_t date_idx = find_column(header, date_column);
  const std::size_t ret_idx = find_column(header, return_column);

  struct Row {
    Date date;
    double ret;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = csv::split_line(line);
    auto bad = [&] {
      return Error(ErrorCode::UnparseableRow, path.string() + ":" + std::to_string(line_no));
    };
    if (fields.size() <= std::max(date_idx, ret_idx)) throw bad();
    auto date = parse_date(fields[date_idx]);
    double r = 0.0;
    if (!date || !parse_number(fields[ret_idx], r) || !std::isfinite(r)) throw bad();
    rows.push_back({*date, r});
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyFile, path.string());

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.date < b.date; });
  ReturnSeries rs;
  rs.dates.reserve(rows.size());
  rs.returns.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].date == rows[i - 1].date)
      throw Error(ErrorCode::DuplicateDate, format_date(rows[i].date));
    rs.dates.push_back(rows[i].date);
    rs.returns.push_back(rows[i].ret);
  }
  return rs;
}

void write_returns_csv(const std::filesystem::path& path, const ReturnSeries& rs,
                       std::string_view date_column, std::string_view return_column) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path.string());
  out << date_column << ',' << return_column << '\n';
  char buf[64];
  for (std::size_t i = 0; i < rs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", rs.returns[i]);
    out << format_date(rs.dates[i]) << ',' << buf << '\n';
  }
}

LossSeries to_losses(const ReturnSeries& rs) {
  LossSeries ls{rs.dates, {}};
  ls.losses.reserve(rs.size());
  for (double r : rs.returns) ls.losses.push_back(-r);
  return ls;
}

ReturnSeries to_returns(const LossSeries& ls) {
  ReturnSeries rs{ls.dates, {}};
  rs.returns.reserve(ls.size());
  for (double y : ls.losses) rs.returns.push_back(-y);
  return rs;
}

SplitRanges split(std::span<const Date> dates, const SplitConfig& cfg) {
  if (!(cfg.train_end < cfg.val_end))
    throw Error(ErrorCode::InvalidConfig, "train_end must precede val_end");
  const std::size_t n = dates.size();
  auto upper = [&](Date d) {
    return static_cast<std::size_t>(std::upper_bound(dates.begin(), dates.end(), d) - dates.begin());
  };
  const std::size_t train_stop = upper(cfg.train_end);
  const std::size_t val_stop = upper(cfg.val_end);
  SplitRanges r{{0, train_stop}, {train_stop, val_stop}, {val_stop, n}};
  if (r.train.empty()) throw Error(ErrorCode::EmptySegment, "train");
  if (r.val.empty()) throw Error(ErrorCode::EmptySegment, "val");
  if (r.test.empty()) throw Error(ErrorCode::EmptySegment, "test");
  return r;
}

}  // namespace rwc
