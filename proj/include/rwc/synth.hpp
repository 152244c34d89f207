#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "rwc/data.hpp"

namespace rwc {

/// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
/// numbers: as easy as 1, 2, 3"). Output is a pure function of (counter, key),
/// so any draw can be reproduced from (seed, stream, index) alone.
///
/// Stream layout used by the simulators:
///   counter = {index & 0xffffffff, index >> 32, stream, 0}
///   key     = {seed & 0xffffffff, seed >> 32}
/// Uniforms take 53 bits from a word pair, (w0 << 32 | w1) >> 11, mapped to
/// the open interval (0, 1) by adding 2^-54. Normals use Box-Muller on the
/// uniforms from words (0, 1) and (2, 3): sqrt(-2 ln u1) cos(2 pi u2).
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block generate(Block counter, Key key);
};

enum class Stream : std::uint32_t { Regime = 0, Returns = 1, Scores = 2 };

/// Uniform draw in (0, 1) for (seed, stream, index).
double uniform_at(std::uint64_t seed, Stream stream, std::uint64_t index);
/// Standard normal draw for (seed, stream, index).
double normal_at(std::uint64_t seed, Stream stream, std::uint64_t index);

struct RegimeModel {
  std::vector<double> mu;
  std::vector<double> sigma;
  std::vector<std::vector<double>> transition;  // row-stochastic K x K
  std::size_t length = 0;
  std::uint64_t seed = 0;
  std::size_t initial_state = 0;
  Date start{std::chrono::year{2000}, std::chrono::January, std::chrono::day{3}};

  std::size_t states() const noexcept { return sigma.size(); }
  /// Throws InvalidConfig on non-stochastic rows or non-positive sigma.
  void validate() const;
};

/// Two-state calm/stress model: daily sigma (0.8%, 2.5%), zero mean,
/// persistence 0.98 / 0.95.
RegimeModel default_two_state_model(std::size_t length, std::uint64_t seed);

struct Simulation {
  ReturnSeries returns;
  std::vector<int> states;
};

/// Markov-switching Gaussian returns on consecutive weekdays from model.start.
Simulation simulate(const RegimeModel& model);

struct ScoreDistribution {
  enum class Kind { Normal, Constant } kind = Kind::Normal;
  double mean = 0.0;
  double stddev = 1.0;
};

std::vector<double> simulate_iid_scores(const ScoreDistribution& dist, std::size_t length, std::uint64_t seed);

/// `count` consecutive weekdays starting at the first weekday on or after `start`.
std::vector<Date> weekday_calendar(Date start, std::size_t count);

}  // namespace rwc
