#include "rwc/tuning.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "rwc/error.hpp"
#include "rwc/evaluation.hpp"

namespace rwc {

RunConfig Candidate::apply(RunConfig base) const {
  base.calibrator = method;
  base.m = m;
  base.lambda = lambda;
  base.h = h;
  base.aci_gamma = gamma;
  return base;
}

std::vector<Candidate> enumerate_candidates(Method method, const GridSpec& grid) {
  std::vector<Candidate> out;
  switch (method) {
    case Method::SWC:
      for (auto m : grid.m_grid) out.push_back({method, m, 0.0, kInfiniteBandwidth, 0.0});
      break;
    case Method::TWC:
      for (auto m : grid.m_grid)
        for (double l : grid.lambda_grid) out.push_back({method, m, l, kInfiniteBandwidth, 0.0});
      break;
    case Method::RWC:
      for (auto m : grid.m_grid)
        for (double l : grid.lambda_grid)
          for (double h : grid.h_grid) out.push_back({method, m, l, h, 0.0});
      break;
    case Method::ACI:
      for (auto m : grid.aci_m_grid)
        for (double g : grid.gamma_grid) out.push_back({method, m, 0.0, kInfiniteBandwidth, g});
      break;
  }
  return out;
}

double tuning_objective(double val_exceedance, double val_rollmax, double alpha) {
  return std::abs(val_exceedance - alpha) + 0.5 * std::max(0.0, val_rollmax - alpha);
}

bool better_candidate(const CandidateResult& a, const CandidateResult& b) {
  if (a.objective != b.objective) return a.objective < b.objective;
  const auto& x = a.candidate;
  const auto& y = b.candidate;
  if (x.m != y.m) return x.m > y.m;
  if (x.lambda != y.lambda) return x.lambda < y.lambda;
  if (x.h != y.h) return x.h > y.h;
  return x.gamma < y.gamma;
}

std::size_t select_candidate(const std::vector<CandidateResult>& results) {
  if (results.empty()) throw Error(ErrorCode::NoCandidates, "empty tuning grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (better_candidate(results[i], results[best])) best = i;
  return best;
}

TuneResult grid_search(Method method, const GridSpec& grid, const Dataset& data, const RunConfig& base_cfg,
                       unsigned threads) {
  const auto candidates = enumerate_candidates(method, grid);
  if (candidates.empty()) throw Error(ErrorCode::NoCandidates, "empty tuning grid");
  if (data.splits.val.size() < kRollingWindow)
    throw Error(ErrorCode::InsufficientLength, "validation segment shorter than the rolling window");

  TuneResult result;
  result.candidates.resize(candidates.size());
  std::vector<std::exception_ptr> errors(candidates.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < candidates.size(); i = next++) {
      try {
        const auto cfg = candidates[i].apply(base_cfg);
        const auto bounds = run_method(data, method, cfg, data.splits.val);
        const auto ind = bounds.indicators();
        const auto rolling = rolling_exceedance(ind);
        CandidateResult& r = result.candidates[i];
        r.candidate = candidates[i];
        r.val_exceedance = exceedance_rate(ind);
        r.val_rollmax = *std::max_element(rolling.begin(), rolling.end());
        r.objective = tuning_objective(r.val_exceedance, r.val_rollmax, base_cfg.alpha);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  unsigned n_threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(candidates.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned k = 1; k < n_threads; ++k) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  result.selected = select_candidate(result.candidates);
  return result;
}

}  // namespace rwc
