#include "brittle_bayes/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "brittle_bayes/maxflow.hpp"

namespace brittle_bayes {

namespace {

long double weighted_sum(const std::vector<double>& v, double scale) {
  long double s = 0.0L;
  for (double x : v) s += static_cast<long double>(x);
  return s * static_cast<long double>(scale);
}

}  // namespace

// ---- Ball -------------------------------------------------------------------

Ball::Ball(double center_, double radius_) : center(center_), radius(radius_) {
  if (!(radius > 0.0)) throw MeasureError("Ball: radius must be positive");
  if (center - radius >= 1.0 || center + radius <= 0.0)
    throw MeasureError("Ball: interval does not intersect [0,1]");
}

// ---- DiscreteMeasure ----------------------------------------------------------

DiscreteMeasure::DiscreteMeasure(std::vector<double> support, std::vector<double> weights) {
  if (support.size() != weights.size())
    throw MeasureError("DiscreteMeasure: support/weights size mismatch");
  if (support.empty()) throw MeasureError("DiscreteMeasure: empty support");

  std::vector<std::size_t> order(support.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return support[i] < support[j]; });

  support_.reserve(support.size());
  weights_.reserve(weights.size());
  for (std::size_t idx : order) {
    double x = support[idx];
    double w = weights[idx];
    if (!(x >= 0.0 && x <= 1.0)) throw MeasureError("DiscreteMeasure: support point outside [0,1]");
    if (!(w >= 0.0)) throw MeasureError("DiscreteMeasure: negative weight");
    if (!support_.empty() && support_.back() == x) {
      weights_.back() += w;  // coalesce duplicates
    } else {
      support_.push_back(x);
      weights_.push_back(w);
    }
  }

  long double total = weighted_sum(weights_, 1.0);
  if (std::fabs(static_cast<double>(total) - 1.0) > 1e-12)
    throw MeasureError("DiscreteMeasure: weights must sum to 1 within 1e-12");
}

DiscreteMeasure DiscreteMeasure::normalized(std::vector<double> support,
                                            std::vector<double> weights) {
  long double total = 0.0L;
  for (double w : weights) {
    if (!(w >= 0.0)) throw MeasureError("DiscreteMeasure: negative weight");
    total += w;
  }
  if (!(total > 0.0L)) throw MeasureError("DiscreteMeasure: zero total mass");
  for (double& w : weights) w = static_cast<double>(w / total);
  return DiscreteMeasure(std::move(support), std::move(weights));
}

DiscreteMeasure DiscreteMeasure::point_mass(double x) {
  return DiscreteMeasure({x}, {1.0});
}

double DiscreteMeasure::mean() const {
  long double s = 0.0L;
  for (std::size_t i = 0; i < support_.size(); ++i)
    s += static_cast<long double>(weights_[i]) * support_[i];
  return static_cast<double>(s);
}

// ---- GridDensity ----------------------------------------------------------------

GridDensity::GridDensity(std::vector<double> cell_values) : values_(std::move(cell_values)) {
  if (values_.empty()) throw MeasureError("GridDensity: no cells");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw MeasureError("GridDensity: invalid cell value");
  long double total = weighted_sum(values_, cell_width());
  if (std::fabs(static_cast<double>(total) - 1.0) > 1e-9)
    throw MeasureError("GridDensity: density must integrate to 1 within 1e-9");
}

GridDensity GridDensity::uniform(int n_cells) {
  if (n_cells <= 0) throw MeasureError("GridDensity: n_cells must be positive");
  return GridDensity(std::vector<double>(static_cast<std::size_t>(n_cells), 1.0));
}

double GridDensity::segment_mass(double a, double b) const {
  a = std::max(a, 0.0);
  b = std::min(b, 1.0);
  if (b <= a) return 0.0;
  const int n = n_cells();
  const double h = cell_width();
  int ia = std::min(n - 1, std::max(0, static_cast<int>(std::floor(a * n))));
  int ib = std::min(n - 1, std::max(0, static_cast<int>(std::floor(b * n))));
  if (ia == ib) return values_[static_cast<std::size_t>(ia)] * (b - a);
  long double s = 0.0L;
  s += static_cast<long double>(values_[static_cast<std::size_t>(ia)]) * ((ia + 1) * h - a);
  for (int i = ia + 1; i < ib; ++i) s += static_cast<long double>(values_[static_cast<std::size_t>(i)]) * h;
  s += static_cast<long double>(values_[static_cast<std::size_t>(ib)]) * (b - ib * h);
  return static_cast<double>(s);
}

double GridDensity::mean() const {
  const double h = cell_width();
  long double s = 0.0L;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double mid = (static_cast<double>(i) + 0.5) * h;
    s += static_cast<long double>(values_[i]) * mid * h;
  }
  return static_cast<double>(s);
}

// ---- ball masses -----------------------------------------------------------------

double ball_mass(const DiscreteMeasure& m, const Ball& b) {
  long double s = 0.0L;
  const auto& xs = m.support();
  const auto& ws = m.weights();
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (b.contains(xs[i])) s += ws[i];
  return static_cast<double>(s);
}

double ball_mass(const GridDensity& g, const Ball& b) {
  return g.segment_mass(b.lo(), b.hi());
}

// ---- total variation ----------------------------------------------------------------

double tv_distance(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  const auto& xa = a.support();
  const auto& wa = a.weights();
  const auto& xb = b.support();
  const auto& wb = b.weights();
  std::size_t i = 0, j = 0;
  long double l1 = 0.0L;
  while (i < xa.size() || j < xb.size()) {
    if (j == xb.size() || (i < xa.size() && xa[i] < xb[j])) {
      l1 += std::fabs(wa[i]);
      ++i;
    } else if (i == xa.size() || xb[j] < xa[i]) {
      l1 += std::fabs(wb[j]);
      ++j;
    } else {
      l1 += std::fabs(wa[i] - wb[j]);
      ++i;
      ++j;
    }
  }
  return static_cast<double>(l1 / 2.0L);
}

double tv_distance(const GridDensity& a, const GridDensity& b) {
  const int na = a.n_cells();
  const int nb = b.n_cells();
  if (na == nb) {
    const double h = a.cell_width();
    long double l1 = 0.0L;
    for (int i = 0; i < na; ++i)
      l1 += std::fabs(a.values()[static_cast<std::size_t>(i)] -
                      b.values()[static_cast<std::size_t>(i)]) * h;
    return static_cast<double>(l1 / 2.0L);
  }
  // Sweep the union of cell boundaries; both densities are constant on each
  // union segment, so the L1 integral below is exact.
  long double l1 = 0.0L;
  int ia = 0, ib = 0;
  double pos = 0.0;
  while (ia < na && ib < nb) {
    double next_a = static_cast<double>(ia + 1) / na;
    double next_b = static_cast<double>(ib + 1) / nb;
    double next = std::min(next_a, next_b);
    l1 += std::fabs(a.values()[static_cast<std::size_t>(ia)] -
                    b.values()[static_cast<std::size_t>(ib)]) * (next - pos);
    pos = next;
    if (next_a <= next) ++ia;
    if (next_b <= next) ++ib;
  }
  return static_cast<double>(l1 / 2.0L);
}

double tv_distance(const DiscreteMeasure& a, const GridDensity& b, AtomSmoothing smoothing) {
  if (smoothing == AtomSmoothing::none) {
    // Atoms and an absolutely continuous density are mutually singular.
    (void)a;
    (void)b;
    return 1.0;
  }
  const int n = b.n_cells();
  const double h = b.cell_width();
  std::vector<double> deposited(static_cast<std::size_t>(n), 0.0);
  for (std::size_t i = 0; i < a.support().size(); ++i) {
    int cell = std::min(n - 1, static_cast<int>(std::floor(a.support()[i] * n)));
    deposited[static_cast<std::size_t>(cell)] += a.weights()[i] / h;
  }
  long double l1 = 0.0L;
  for (int i = 0; i < n; ++i)
    l1 += std::fabs(deposited[static_cast<std::size_t>(i)] -
                    b.values()[static_cast<std::size_t>(i)]) * h;
  return static_cast<double>(l1 / 2.0L);
}

double tv_distance(const GridDensity& a, const DiscreteMeasure& b, AtomSmoothing smoothing) {
  return tv_distance(b, a, smoothing);
}

std::pair<GridDensity, GridDensity> co_refine(const GridDensity& a, const GridDensity& b) {
  const std::int64_t na = a.n_cells();
  const std::int64_t nb = b.n_cells();
  const std::int64_t g = std::gcd(na, nb);
  const std::int64_t n = na / g * nb;
  if (n > 10'000'000) throw MeasureError("co_refine: refined grid would be too large");
  auto refine = [n](const GridDensity& d) {
    const std::int64_t factor = n / d.n_cells();
    std::vector<double> cells(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
      cells[static_cast<std::size_t>(i)] =
          d.values()[static_cast<std::size_t>(i / factor)];
    return GridDensity(std::move(cells));
  };
  return {refine(a), refine(b)};
}

// ---- Prokhorov ---------------------------------------------------------------------

namespace {

// Strassen feasibility at level eps: a coupling of a and b must place mass at
// least 1 - eps on pairs with |x - y| < eps. Capacities are scaled to integers.
bool prokhorov_feasible(const DiscreteMeasure& a, const DiscreteMeasure& b, double eps) {
  constexpr std::int64_t kScale = 1'000'000'000;
  const int na = static_cast<int>(a.size());
  const int nb = static_cast<int>(b.size());
  const int source = 0;
  const int sink = na + nb + 1;
  MaxFlow flow(na + nb + 2);
  for (int i = 0; i < na; ++i) {
    auto cap = static_cast<std::int64_t>(a.weights()[static_cast<std::size_t>(i)] * kScale);
    flow.add_edge(source, 1 + i, cap);
  }
  for (int j = 0; j < nb; ++j) {
    auto cap = static_cast<std::int64_t>(b.weights()[static_cast<std::size_t>(j)] * kScale);
    flow.add_edge(1 + na + j, sink, cap);
  }
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      if (std::fabs(a.support()[static_cast<std::size_t>(i)] -
                    b.support()[static_cast<std::size_t>(j)]) < eps)
        flow.add_edge(1 + i, 1 + na + j, kScale);
  const std::int64_t need =
      static_cast<std::int64_t>((1.0 - eps) * kScale) - static_cast<std::int64_t>(na + nb);
  return flow.run(source, sink) >= need;
}

}  // namespace

double prokhorov_distance(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol) {
  if (!(tol > 0.0)) throw MeasureError("prokhorov_distance: tol must be positive");
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 40 && hi - lo > 0.5 * tol; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (prokhorov_feasible(a, b, mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// ---- moments ------------------------------------------------------------------------

std::vector<double> moment_map(const DiscreteMeasure& m, int k) {
  if (k < 1) throw MeasureError("moment_map: k must be >= 1");
  std::vector<long double> acc(static_cast<std::size_t>(k), 0.0L);
  for (std::size_t i = 0; i < m.size(); ++i) {
    long double p = 1.0L;
    for (int j = 0; j < k; ++j) {
      p *= m.support()[i];
      acc[static_cast<std::size_t>(j)] += static_cast<long double>(m.weights()[i]) * p;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) out[static_cast<std::size_t>(j)] = static_cast<double>(acc[static_cast<std::size_t>(j)]);
  return out;
}

std::vector<double> moment_map(const GridDensity& g, int k) {
  if (k < 1) throw MeasureError("moment_map: k must be >= 1");
  const int n = g.n_cells();
  const double h = g.cell_width();
  std::vector<long double> acc(static_cast<std::size_t>(k), 0.0L);
  // integral of x^j over [a,b] is (b^{j+1} - a^{j+1})/(j+1)
  std::vector<long double> pa(static_cast<std::size_t>(k + 1));
  std::vector<long double> pb(static_cast<std::size_t>(k + 1));
  for (int i = 0; i < n; ++i) {
    long double a = static_cast<long double>(i) * h;
    long double b = static_cast<long double>(i + 1) * h;
    long double xa = a, xb = b;
    for (int j = 0; j <= k; ++j) {
      pa[static_cast<std::size_t>(j)] = xa;
      pb[static_cast<std::size_t>(j)] = xb;
      xa *= a;
      xb *= b;
    }
    long double v = g.values()[static_cast<std::size_t>(i)];
    for (int j = 1; j <= k; ++j)
      acc[static_cast<std::size_t>(j - 1)] +=
          v * (pb[static_cast<std::size_t>(j)] - pa[static_cast<std::size_t>(j)]) / (j + 1);
  }
  std::vector<double> out(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) out[static_cast<std::size_t>(j)] = static_cast<double>(acc[static_cast<std::size_t>(j)]);
  return out;
}

// ---- density surgery -------------------------------------------------------------------

GridDensity with_gap(const GridDensity& g, double center, double width, double plateau) {
  if (!(width > 0.0) || !(plateau >= 0.0)) throw MeasureError("with_gap: bad parameters");
  const double glo = center - width / 2.0;
  const double ghi = center + width / 2.0;
  if (glo < 0.0 || ghi > 1.0) throw MeasureError("with_gap: gap leaves [0,1]");
  const int n = g.n_cells();
  const double h = g.cell_width();
  std::vector<double> cells(g.values());
  for (int i = 0; i < n; ++i) {
    double a = i * h;
    double b = (i + 1) * h;
    double in = std::max(0.0, std::min(b, ghi) - std::max(a, glo));
    if (in <= 0.0) continue;
    double frac = in / h;
    cells[static_cast<std::size_t>(i)] *= (1.0 - frac) + frac * plateau;
  }
  long double mass = 0.0L;
  for (double v : cells) mass += v;
  mass *= h;
  if (!(mass > 0.0L)) throw MeasureError("with_gap: gap removed all mass");
  for (double& v : cells) v = static_cast<double>(v / mass);
  return GridDensity(std::move(cells));
}

}  // namespace brittle_bayes
