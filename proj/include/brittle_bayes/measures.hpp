#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace brittle_bayes {

struct MeasureError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Open interval (center - radius, center + radius) intersected with [0, 1].
/// Open-ball semantics throughout: a point exactly on the boundary carries
/// zero mass into the ball.
struct Ball {
  double center;
  double radius;

  Ball(double center_, double radius_);

  double lo() const { return center - radius < 0.0 ? 0.0 : center - radius; }
  double hi() const { return center + radius > 1.0 ? 1.0 : center + radius; }
  bool contains(double x) const { return x > center - radius && x < center + radius; }
};

/// Finitely supported probability measure on [0, 1].
///
/// Support points are kept strictly increasing; duplicate points passed to the
/// constructor are coalesced. Weights are nonnegative and sum to 1 within 1e-12.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<double> support, std::vector<double> weights);

  /// Builds a measure from nonnegative weights with any positive total mass,
  /// rescaling so the weights sum to one.
  static DiscreteMeasure normalized(std::vector<double> support, std::vector<double> weights);

  static DiscreteMeasure point_mass(double x);

  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return support_.size(); }

  double mean() const;

 private:
  DiscreteMeasure() = default;
  std::vector<double> support_;
  std::vector<double> weights_;
};

/// Piecewise-constant probability density on a uniform partition of [0, 1].
/// The cell-width-weighted sum of values is 1 within 1e-9.
class GridDensity {
 public:
  static constexpr int kDefaultCells = 20000;

  explicit GridDensity(std::vector<double> cell_values);

  static GridDensity uniform(int n_cells = kDefaultCells);

  int n_cells() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }
  double cell_width() const { return 1.0 / static_cast<double>(values_.size()); }

  /// Integral of the density over [a, b] with partial-cell proration.
  double segment_mass(double a, double b) const;

  double mean() const;

 private:
  std::vector<double> values_;
};

// ---- ball masses -----------------------------------------------------------

double ball_mass(const DiscreteMeasure& m, const Ball& b);
double ball_mass(const GridDensity& g, const Ball& b);

// ---- total variation --------------------------------------------------------

/// sup_A |mu(A) - nu(A)|, computed as half the L1 distance on the co-refined
/// representation (merged support for atoms, merged cell boundaries for grids).
double tv_distance(const DiscreteMeasure& a, const DiscreteMeasure& b);
double tv_distance(const GridDensity& a, const GridDensity& b);

/// Mixed atomic/density pairs are mutually singular, so their exact TV is 1.
/// Callers that want the atoms blurred onto the grid must say so explicitly.
enum class AtomSmoothing { none, deposit_on_grid };
double tv_distance(const DiscreteMeasure& a, const GridDensity& b,
                   AtomSmoothing smoothing = AtomSmoothing::none);
double tv_distance(const GridDensity& a, const DiscreteMeasure& b,
                   AtomSmoothing smoothing = AtomSmoothing::none);

/// Exact common refinement of two grids onto lcm(n1, n2) cells.
/// Both outputs reproduce every original cell mass exactly.
std::pair<GridDensity, GridDensity> co_refine(const GridDensity& a, const GridDensity& b);

// ---- Prokhorov ---------------------------------------------------------------

/// inf{eps : mu(A) <= nu(A^eps) + eps for all A}, within tol.
///
/// Binary search over eps; each candidate is decided by a Strassen-type
/// coupling feasibility check, reduced to integer-scaled max-flow on the
/// bipartite support graph with an edge iff |x - y| < eps and deficiency
/// allowance eps.
double prokhorov_distance(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol);

// ---- moments ------------------------------------------------------------------

/// (E[X], ..., E[X^k]); exact atom sums for discrete measures, exact per-cell
/// monomial integrals for grids.
std::vector<double> moment_map(const DiscreteMeasure& m, int k);
std::vector<double> moment_map(const GridDensity& g, int k);

// ---- density surgery ------------------------------------------------------------

/// Suppresses the density by `plateau` on (center - width/2, center + width/2)
/// and renormalizes. The gap interval must stay inside [0, 1].
GridDensity with_gap(const GridDensity& g, double center, double width, double plateau);

}  // namespace brittle_bayes
