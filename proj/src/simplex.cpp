#include "brittle_bayes/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace brittle_bayes {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kFeasEps = 1e-7;

// Standard dense tableau with Bland's rule. Columns 0..n-1 are the problem
// variables; columns n..n+m-1 the phase-1 artificials. Row 0 holds the
// objective being maximized.
class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& A, const std::vector<double>& b)
      : m_(A.size()), n_(A.empty() ? 0 : A[0].size()), t_((m_ + 1) * (n_ + m_ + 1), 0.0),
        basis_(m_) {
    for (std::size_t r = 0; r < m_; ++r) {
      double sign = b[r] < 0.0 ? -1.0 : 1.0;
      for (std::size_t c = 0; c < n_; ++c) at(r + 1, c) = sign * A[r][c];
      at(r + 1, n_ + r) = 1.0;
      rhs(r + 1) = sign * b[r];
      basis_[r] = n_ + r;
    }
  }

  // Phase 1: maximize -(sum of artificials). Returns the residual infeasibility.
  double phase1() {
    for (std::size_t c = 0; c <= n_ + m_; ++c) at(0, c) = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t c = 0; c < n_; ++c) at(0, c) += at(r + 1, c);
      rhs(0) += rhs(r + 1);
    }
    iterate(n_ + m_);
    double infeas = rhs(0);
    // Pivot any artificial still basic (at value 0) out where possible.
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      for (std::size_t c = 0; c < n_; ++c) {
        if (std::fabs(at(r + 1, c)) > kPivotEps) {
          pivot(r, c);
          break;
        }
      }
    }
    return infeas;
  }

  // Phase 2 over the given objective; artificial columns are frozen out.
  bool phase2(const std::vector<double>& c) {
    for (std::size_t j = 0; j <= n_ + m_; ++j) at(0, j) = 0.0;
    for (std::size_t j = 0; j < n_; ++j) at(0, j) = c[j];
    // Express the objective in terms of nonbasic variables.
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] >= n_) continue;
      double coef = at(0, basis_[r]);
      if (coef == 0.0) continue;
      for (std::size_t j = 0; j <= n_ + m_; ++j) at(0, j) -= coef * at(r + 1, j);
      rhs(0) -= coef * rhs(r + 1);
    }
    return iterate(n_);
  }

  double objective() const { return -t_[n_ + m_]; }

  std::vector<double> solution() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] < n_) x[basis_[r]] = rhs_const(r + 1);
    return x;
  }

 private:
  double& at(std::size_t row, std::size_t col) { return t_[row * (n_ + m_ + 1) + col]; }
  double at_const(std::size_t row, std::size_t col) const { return t_[row * (n_ + m_ + 1) + col]; }
  double& rhs(std::size_t row) { return t_[row * (n_ + m_ + 1) + n_ + m_]; }
  double rhs_const(std::size_t row) const { return t_[row * (n_ + m_ + 1) + n_ + m_]; }

  void pivot(std::size_t row, std::size_t col) {
    const std::size_t width = n_ + m_ + 1;
    double p = at(row + 1, col);
    for (std::size_t j = 0; j < width; ++j) t_[(row + 1) * width + j] /= p;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == row + 1) continue;
      double f = t_[r * width + col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) t_[r * width + j] -= f * t_[(row + 1) * width + j];
    }
    basis_[row] = col;
  }

  // Bland's rule: entering = lowest-index improving column, leaving = lowest
  // basis index among the ratio-test minimizers. Returns false if unbounded.
  bool iterate(std::size_t allowed_cols) {
    const std::size_t max_iters = 50 * (n_ + m_ + 10);
    for (std::size_t it = 0; it < max_iters; ++it) {
      std::size_t enter = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (at(0, j) > kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter == allowed_cols) return true;  // optimal
      std::size_t leave = m_;
      double best_ratio = 0.0;
      for (std::size_t r = 0; r < m_; ++r) {
        double a = at(r + 1, enter);
        if (a <= kPivotEps) continue;
        double num = rhs(r + 1);
        if (num < 0.0) num = 0.0;  // rounding guard; basic values stay >= 0
        double ratio = num / a;
        if (leave == m_ || ratio < best_ratio - 1e-15 ||
            (std::fabs(ratio - best_ratio) <= 1e-15 && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave == m_) return false;  // unbounded
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex: iteration limit reached");
  }

  std::size_t m_, n_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult solve_equality_lp(const std::vector<std::vector<double>>& A,
                           const std::vector<double>& b, const std::vector<double>& c) {
  if (A.empty() || A.size() != b.size())
    throw std::invalid_argument("solve_equality_lp: bad constraint system");
  for (const auto& row : A)
    if (row.size() != c.size()) throw std::invalid_argument("solve_equality_lp: ragged matrix");

  Tableau tab(A, b);
  LpResult res;
  if (tab.phase1() > kFeasEps) {
    res.status = LpResult::Status::infeasible;
    return res;
  }
  if (!tab.phase2(c)) {
    res.status = LpResult::Status::unbounded;
    return res;
  }
  res.status = LpResult::Status::optimal;
  res.x = tab.solution();
  long double v = 0.0L;
  for (std::size_t j = 0; j < c.size(); ++j) v += static_cast<long double>(c[j]) * res.x[j];
  res.value = static_cast<double>(v);
  return res;
}

}  // namespace brittle_bayes
