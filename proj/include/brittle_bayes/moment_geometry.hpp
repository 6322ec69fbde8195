#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "brittle_bayes/measures.hpp"

namespace brittle_bayes {

struct InfeasiblePrefix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidThreshold : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Attainable range of one moment given a prefix of lower moments.
struct MomentRange {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// Membership of q = (E[X], ..., E[X^k]) in the truncated Hausdorff moment
/// body of [0, 1], within tol: the classical Hankel matrices built from
/// (1, q_1, ..., q_k) must have minimum eigenvalue >= -tol.
bool is_feasible(const std::vector<double>& q, double tol);

/// [inf, sup] of E[X^{j+1}] over probability measures on [0, 1] whose first
/// j moments equal q_prefix, by linear programming over measures supported
/// on a uniform grid of grid_n points. Inner approximation with O(1/grid_n)
/// bias. Throws InfeasiblePrefix when the equality system has no nonnegative
/// solution.
MomentRange conditional_moment_range(const std::vector<double>& q_prefix, int grid_n);

/// Same LP machinery for an arbitrary target order > prefix length; used by
/// nesting properties (conditioning on more moments can only shrink a range).
MomentRange moment_range_for_order(const std::vector<double>& q_prefix, int order, int grid_n);

/// Draws q_1 ~ U[0,1], then each next coordinate uniformly on its conditional
/// moment range. The result is feasible by construction (every value in the
/// range is attained by some grid-supported measure).
std::vector<double> sample_iterated_uniform_q(int k, std::uint64_t rng_seed, int grid_n = 401);

/// Finitely supported measure on the real line carrying mean/variance
/// metadata; the home of the Chebyshev-extremal three-point measures, which
/// do not live on [0, 1].
class StandardizedMeasure {
 public:
  StandardizedMeasure(std::vector<double> points, std::vector<double> weights);

  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

  double mean() const;
  double variance() const;

  /// P[|X| >= t].
  double two_sided_tail(double t) const;

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

/// The measure attaining P[|X| >= t] = min{1, 1/t^2} among all mean-0
/// variance-1 distributions: mass 1/(2t^2) at +-t and the rest at 0 for
/// t >= 1, and mass 1/2 at +-1 for t < 1.
StandardizedMeasure chebyshev_extremal_measure(double t);

}  // namespace brittle_bayes
