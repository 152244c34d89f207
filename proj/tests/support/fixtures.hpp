#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "rwc/data.hpp"
#include "rwc/forecasters.hpp"
#include "rwc/synth.hpp"

namespace rwc::testing {

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("rwc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Losses equal to the given scores against a zero base forecast, so that
/// calibration scores are exactly `scores`.
struct ScoreStream {
  LossSeries losses;
  ForecastSeries forecasts;
};

inline ScoreStream score_stream(const std::vector<double>& scores) {
  ScoreStream s;
  s.losses.dates = weekday_calendar(Date{std::chrono::year{2000}, std::chrono::January, std::chrono::day{3}},
                                    scores.size());
  s.losses.losses = scores;
  s.forecasts.dates = s.losses.dates;
  s.forecasts.qhat.assign(scores.size(), 0.0);
  s.forecasts.valid_from = 0;
  return s;
}

}  // namespace rwc::testing
