#include "brittle_bayes/moment_geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "brittle_bayes/rng.hpp"
#include "brittle_bayes/simplex.hpp"

namespace brittle_bayes {

namespace {

double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  return solver.eigenvalues().minCoeff();
}

// The two Hankel matrices whose positive semidefiniteness characterizes
// membership in the truncated Hausdorff moment body of [0, 1]:
//   k = 2m:   (q_{i+j})_{i,j<=m}        and (q_{i+j+1} - q_{i+j+2})_{i,j<=m-1}
//   k = 2m+1: (q_{i+j+1})_{i,j<=m}      and (q_{i+j} - q_{i+j+1})_{i,j<=m}
// with q_0 = 1.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> hankel_pair(const std::vector<double>& q) {
  const int k = static_cast<int>(q.size());
  auto moment = [&](int i) { return i == 0 ? 1.0 : q[static_cast<std::size_t>(i - 1)]; };
  if (k % 2 == 0) {
    const int m = k / 2;
    Eigen::MatrixXd a(m + 1, m + 1);
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= m; ++j) a(i, j) = moment(i + j);
    Eigen::MatrixXd b(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) b(i, j) = moment(i + j + 1) - moment(i + j + 2);
    return {a, b};
  }
  const int m = (k - 1) / 2;
  Eigen::MatrixXd a(m + 1, m + 1);
  Eigen::MatrixXd b(m + 1, m + 1);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) {
      a(i, j) = moment(i + j + 1);
      b(i, j) = moment(i + j) - moment(i + j + 1);
    }
  return {a, b};
}

// Shared LP assembly: columns are grid points, rows are the normalization and
// the prefix moment equalities.
struct MomentLp {
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<double> objective;   // x_i^order per column
  std::vector<double> grid;
};

MomentLp build_moment_lp(const std::vector<double>& q_prefix, int order, int grid_n) {
  const int j = static_cast<int>(q_prefix.size());
  MomentLp lp;
  lp.grid.resize(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i)
    lp.grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / (grid_n - 1);

  lp.A.assign(static_cast<std::size_t>(j + 1),
              std::vector<double>(static_cast<std::size_t>(grid_n)));
  lp.b.assign(static_cast<std::size_t>(j + 1), 0.0);
  lp.objective.resize(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i) {
    double x = lp.grid[static_cast<std::size_t>(i)];
    double p = 1.0;
    lp.A[0][static_cast<std::size_t>(i)] = 1.0;
    for (int l = 1; l <= j; ++l) {
      p *= x;
      lp.A[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] = p;
    }
    lp.objective[static_cast<std::size_t>(i)] = std::pow(x, order);
  }
  lp.b[0] = 1.0;
  for (int l = 1; l <= j; ++l) lp.b[static_cast<std::size_t>(l)] = q_prefix[static_cast<std::size_t>(l - 1)];
  return lp;
}

}  // namespace

bool is_feasible(const std::vector<double>& q, double tol) {
  if (q.empty()) throw std::invalid_argument("is_feasible: empty moment vector");
  if (tol < 0.0) throw std::invalid_argument("is_feasible: tol must be >= 0");
  for (double qi : q)
    if (qi < -tol || qi > 1.0 + tol) return false;
  auto [a, b] = hankel_pair(q);
  return min_eigenvalue(a) >= -tol && min_eigenvalue(b) >= -tol;
}

MomentRange moment_range_for_order(const std::vector<double>& q_prefix, int order, int grid_n) {
  if (grid_n < 100) throw std::invalid_argument("moment_range: grid_n must be >= 100");
  if (order <= static_cast<int>(q_prefix.size()))
    throw std::invalid_argument("moment_range: order must exceed prefix length");
  MomentLp lp = build_moment_lp(q_prefix, order, grid_n);

  auto negated = lp.objective;
  for (double& v : negated) v = -v;

  LpResult max_res = solve_equality_lp(lp.A, lp.b, lp.objective);
  if (max_res.status == LpResult::Status::infeasible)
    throw InfeasiblePrefix("moment_range: prefix not attainable on the grid");
  LpResult min_res = solve_equality_lp(lp.A, lp.b, negated);
  if (min_res.status == LpResult::Status::infeasible)
    throw InfeasiblePrefix("moment_range: prefix not attainable on the grid");

  MomentRange range;
  range.lo = -min_res.value;
  range.hi = max_res.value;
  if (range.lo > range.hi) std::swap(range.lo, range.hi);  // solver noise on degenerate fibers
  range.lo = std::clamp(range.lo, 0.0, 1.0);
  range.hi = std::clamp(range.hi, 0.0, 1.0);
  return range;
}

MomentRange conditional_moment_range(const std::vector<double>& q_prefix, int grid_n) {
  return moment_range_for_order(q_prefix, static_cast<int>(q_prefix.size()) + 1, grid_n);
}

std::vector<double> sample_iterated_uniform_q(int k, std::uint64_t rng_seed, int grid_n) {
  if (k < 1) throw std::invalid_argument("sample_iterated_uniform_q: k must be >= 1");
  Rng rng(rng_seed);
  std::vector<double> q;
  q.reserve(static_cast<std::size_t>(k));
  q.push_back(rng.uniform());
  while (static_cast<int>(q.size()) < k) {
    MomentRange range = conditional_moment_range(q, grid_n);
    q.push_back(rng.uniform(range.lo, range.hi));
  }
  return q;
}

// ---- StandardizedMeasure -----------------------------------------------------

StandardizedMeasure::StandardizedMeasure(std::vector<double> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.size() != weights_.size() || points_.empty())
    throw std::invalid_argument("StandardizedMeasure: bad support");
  long double total = 0.0L;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw std::invalid_argument("StandardizedMeasure: negative weight");
    total += w;
  }
  if (std::fabs(static_cast<double>(total) - 1.0) > 1e-12)
    throw std::invalid_argument("StandardizedMeasure: weights must sum to 1");
}

double StandardizedMeasure::mean() const {
  long double s = 0.0L;
  for (std::size_t i = 0; i < points_.size(); ++i)
    s += static_cast<long double>(weights_[i]) * points_[i];
  return static_cast<double>(s);
}

double StandardizedMeasure::variance() const {
  const double c = mean();
  long double s = 0.0L;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    double d = points_[i] - c;
    s += static_cast<long double>(weights_[i]) * d * d;
  }
  return static_cast<double>(s);
}

double StandardizedMeasure::two_sided_tail(double t) const {
  long double s = 0.0L;
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (std::fabs(points_[i]) >= t) s += weights_[i];
  return static_cast<double>(s);
}

StandardizedMeasure chebyshev_extremal_measure(double t) {
  if (!(t > 0.0)) throw InvalidThreshold("chebyshev_extremal_measure: t must be positive");
  if (t < 1.0) return StandardizedMeasure({-1.0, 1.0}, {0.5, 0.5});
  const double tail_half = 1.0 / (2.0 * t * t);
  return StandardizedMeasure({-t, 0.0, t}, {tail_half, 1.0 - 2.0 * tail_half, tail_half});
}

}  // namespace brittle_bayes
