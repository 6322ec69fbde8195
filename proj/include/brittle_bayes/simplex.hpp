#pragma once

#include <vector>

namespace brittle_bayes {

/// Dense two-phase simplex for small equality-form linear programs:
///
///   maximize c.x   subject to   A x = b,  x >= 0.
///
/// Intended for moment problems: a handful of rows, up to a few thousand
/// columns. Bland's rule keeps the degenerate moment bases from cycling.
struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  double value = 0.0;
  std::vector<double> x;
};

LpResult solve_equality_lp(const std::vector<std::vector<double>>& A,
                           const std::vector<double>& b,
                           const std::vector<double>& c);

}  // namespace brittle_bayes
