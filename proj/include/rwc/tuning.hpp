#pragma once

#include <cstddef>
#include <vector>

#include "rwc/pipeline.hpp"

namespace rwc {

struct GridSpec {
  std::vector<std::size_t> m_grid{252, 504, 756};
  std::vector<double> lambda_grid{0.002, 0.005, 0.01};
  std::vector<double> h_grid{0.5, 1.0, 2.0};
  std::vector<double> gamma_grid{0.002, 0.005, 0.01, 0.02};
  std::vector<std::size_t> aci_m_grid{252};
};

struct Candidate {
  Method method = Method::SWC;
  std::size_t m = 252;
  double lambda = 0.0;
  double h = kInfiniteBandwidth;
  double gamma = 0.0;

  RunConfig apply(RunConfig base) const;
  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Candidates in grid order: SWC over m; TWC over m x lambda; RWC over
/// m x lambda x h; ACI over aci_m x gamma.
std::vector<Candidate> enumerate_candidates(Method method, const GridSpec& grid);

/// |exc - alpha| + 0.5 max{0, rollmax - alpha}.
double tuning_objective(double val_exceedance, double val_rollmax, double alpha);

struct CandidateResult {
  Candidate candidate;
  double val_exceedance = 0.0;
  double val_rollmax = 0.0;
  double objective = 0.0;
};

struct TuneResult {
  std::vector<CandidateResult> candidates;
  std::size_t selected = 0;

  const Candidate& best() const { return candidates.at(selected).candidate; }
};

/// Strict ordering used for selection: objective, then larger m, smaller
/// lambda, larger h, smaller gamma.
bool better_candidate(const CandidateResult& a, const CandidateResult& b);

/// Picks the winner from already-evaluated candidates.
std::size_t select_candidate(const std::vector<CandidateResult>& results);

/// Evaluates every candidate on the validation range (buffer primed from
/// train) and selects the best. `threads` = 0 uses hardware concurrency.
TuneResult grid_search(Method method, const GridSpec& grid, const Dataset& data, const RunConfig& base_cfg,
                       unsigned threads = 0);

}  // namespace rwc
