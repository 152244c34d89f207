#include "rwc/synth.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rwc/error.hpp"

namespace rwc {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

Philox4x32::Block block_for(std::uint64_t seed, Stream stream, std::uint64_t index) {
  const Philox4x32::Block ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                              static_cast<std::uint32_t>(stream), 0u};
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Philox4x32::generate(ctr, key);
}

double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53 + 0x1.0p-54;
}

}  // namespace

Philox4x32::Block Philox4x32::generate(Block ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

double uniform_at(std::uint64_t seed, Stream stream, std::uint64_t index) {
  const auto b = block_for(seed, stream, index);
  return to_unit(b[0], b[1]);
}

double normal_at(std::uint64_t seed, Stream stream, std::uint64_t index) {
  const auto b = block_for(seed, stream, index);
  const double u1 = to_unit(b[0], b[1]);
  const double u2 = to_unit(b[2], b[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void RegimeModel::validate() const {
  const std::size_t k = sigma.size();
  if (k == 0 || mu.size() != k || transition.size() != k)
    throw Error(ErrorCode::InvalidConfig, "regime model dimensions disagree");
  if (initial_state >= k) throw Error(ErrorCode::InvalidConfig, "initial state out of range");
  for (std::size_t i = 0; i < k; ++i) {
    if (!(sigma[i] > 0.0)) throw Error(ErrorCode::InvalidConfig, "regime sigma must be positive");
    if (transition[i].size() != k) throw Error(ErrorCode::InvalidConfig, "transition matrix is not square");
    double row = 0.0;
    for (double p : transition[i]) {
      if (!(p >= 0.0)) throw Error(ErrorCode::InvalidConfig, "negative transition probability");
      row += p;
    }
    if (std::abs(row - 1.0) > 1e-12)
      throw Error(ErrorCode::InvalidConfig, "transition row " + std::to_string(i) + " does not sum to 1");
  }
}

RegimeModel default_two_state_model(std::size_t length, std::uint64_t seed) {
  RegimeModel m;
  m.mu = {0.0, 0.0};
  m.sigma = {0.008, 0.025};
  m.transition = {{0.98, 0.02}, {0.05, 0.95}};
  m.length = length;
  m.seed = seed;
  return m;
}

std::vector<Date> weekday_calendar(Date start, std::size_t count) {
  using namespace std::chrono;
  std::vector<Date> out;
  out.reserve(count);
  sys_days day{start};
  while (out.size() < count) {
    const weekday wd{day};
    if (wd != Saturday && wd != Sunday) out.emplace_back(day);
    day += days{1};
  }
  return out;
}

Simulation simulate(const RegimeModel& model) {
  model.validate();
  Simulation sim;
  sim.returns.dates = weekday_calendar(model.start, model.length);
  sim.returns.returns.resize(model.length);
  sim.states.resize(model.length);

  std::size_t state = model.initial_state;
  for (std::size_t t = 0; t < model.length; ++t) {
    if (t > 0) {
      const auto& row = model.transition[state];
      const double u = uniform_at(model.seed, Stream::Regime, t);
      double cum = 0.0;
      std::size_t next = row.size() - 1;
      for (std::size_t j = 0; j < row.size(); ++j) {
        cum += row[j];
        if (u < cum) {
          next = j;
          break;
        }
      }
      state = next;
    }
    sim.states[t] = static_cast<int>(state);
    sim.returns.returns[t] = model.mu[state] + model.sigma[state] * normal_at(model.seed, Stream::Returns, t);
  }
  return sim;
}

std::vector<double> simulate_iid_scores(const ScoreDistribution& dist, std::size_t length, std::uint64_t seed) {
  std::vector<double> out(length, dist.mean);
  if (dist.kind == ScoreDistribution::Kind::Constant) return out;
  if (!(dist.stddev > 0.0)) throw Error(ErrorCode::InvalidConfig, "score stddev must be positive");
  for (std::size_t t = 0; t < length; ++t) out[t] = dist.mean + dist.stddev * normal_at(seed, Stream::Scores, t);
  return out;
}

}  // namespace rwc
