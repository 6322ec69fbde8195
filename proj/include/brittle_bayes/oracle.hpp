#pragma once

#include <cstdint>
#include <stdexcept>

#include "brittle_bayes/bounds_engine.hpp"

namespace brittle_bayes {

struct NoFeasibleCandidate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AllCandidatesZeroEvidence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  double best_value = 0.0;
  WeightedAtoms witness;
  std::int64_t candidates_evaluated = 0;
  std::int64_t candidates_feasible = 0;
};

/// Brute-force search over finite mixtures of grid-supported discrete measures
/// satisfying the class constraints, independent of the bounds engine. The
/// candidate stream is a deterministic function of the seed and is consumed in
/// order, so doubling the budget replays the same prefix: best values are
/// monotone in the budget when seeds are nested. One-sided by construction:
/// the best found value never exceeds the true optimum.
OracleResult oracle_prior_bound(const PriorClass& cls, const QuantityOfInterest& phi,
                                std::int64_t budget, std::uint64_t seed);

/// Same search for conditional expectations; candidates giving the data zero
/// probability are skipped.
OracleResult oracle_posterior_bound(const PriorClass& cls, const QuantityOfInterest& phi,
                                    const Observation& obs, std::int64_t budget,
                                    std::uint64_t seed);

}  // namespace brittle_bayes
