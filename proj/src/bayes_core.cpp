#include "brittle_bayes/bayes_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "brittle_bayes/moment_geometry.hpp"

namespace brittle_bayes {

// ---- Observation ---------------------------------------------------------------

namespace {

void sort_balls(std::vector<Ball>& balls) {
  std::sort(balls.begin(), balls.end(), [](const Ball& a, const Ball& b) {
    if (a.center != b.center) return a.center < b.center;
    return a.radius < b.radius;
  });
}

}  // namespace

Observation::Observation(const std::vector<double>& centers, double radius) {
  if (centers.empty()) throw std::invalid_argument("Observation: need at least one ball");
  balls.reserve(centers.size());
  for (double c : centers) balls.emplace_back(c, radius);
  sort_balls(balls);
}

Observation::Observation(std::vector<Ball> balls_) : balls(std::move(balls_)) {
  if (balls.empty()) throw std::invalid_argument("Observation: need at least one ball");
  sort_balls(balls);
}

// ---- QuantityOfInterest ----------------------------------------------------------

QuantityOfInterest QuantityOfInterest::mean() {
  QuantityOfInterest q;
  q.kind_ = Kind::mean;
  q.label_ = "mean";
  return q;
}

QuantityOfInterest QuantityOfInterest::tail_above(double threshold) {
  QuantityOfInterest q;
  q.kind_ = Kind::tail_above;
  q.threshold_ = threshold;
  q.label_ = "tail_above";
  return q;
}

QuantityOfInterest QuantityOfInterest::constant(double value) {
  QuantityOfInterest q;
  q.kind_ = Kind::constant;
  q.constant_ = value;
  q.label_ = "constant";
  return q;
}

QuantityOfInterest QuantityOfInterest::custom(
    std::string label, std::function<double(const DiscreteMeasure&)> on_discrete,
    std::function<double(const GridDensity&)> on_grid) {
  QuantityOfInterest q;
  q.kind_ = Kind::custom;
  q.label_ = std::move(label);
  q.on_discrete_ = std::move(on_discrete);
  q.on_grid_ = std::move(on_grid);
  return q;
}

double QuantityOfInterest::operator()(const DiscreteMeasure& m) const {
  switch (kind_) {
    case Kind::mean:
      return m.mean();
    case Kind::tail_above: {
      long double s = 0.0L;
      for (std::size_t i = 0; i < m.size(); ++i)
        if (m.support()[i] >= threshold_) s += m.weights()[i];
      return static_cast<double>(s);
    }
    case Kind::constant:
      return constant_;
    case Kind::custom:
      return on_discrete_(m);
  }
  return 0.0;
}

double QuantityOfInterest::operator()(const GridDensity& g) const {
  switch (kind_) {
    case Kind::mean:
      return g.mean();
    case Kind::tail_above:
      return g.segment_mass(threshold_, 1.0);
    case Kind::constant:
      return constant_;
    case Kind::custom:
      return on_grid_(g);
  }
  return 0.0;
}

QuantityOfInterest QuantityOfInterest::negated() const {
  QuantityOfInterest self = *this;
  return custom("neg_" + label_,
                [self](const DiscreteMeasure& m) { return -self(m); },
                [self](const GridDensity& g) { return -self(g); });
}

// ---- model kernels -----------------------------------------------------------------

namespace detail {

struct ModelKernel {
  std::string label;
  std::pair<double, double> domain{1e-4, 1.0 - 1e-4};
  std::vector<double> breakpoints;
  int qoi_cells = 2000;  // grid resolution handed to custom functionals

  std::function<double(double theta, double a, double b)> seg;   // integral of f
  std::function<double(double theta, double a, double b)> xseg;  // integral of x f
  std::function<double(double x, double theta)> density;
};

}  // namespace detail

namespace {

// Antiderivatives of the two-sided beta-like density. Both are exact, so
// segment masses and means carry no quadrature error.
//   F(x)  = -(1-theta) (1-x)^(1+1/theta) + theta x^(1+1/(1-theta))
//   G(x)  = c1 [ (1-x)^(s+2)/(s+2) - (1-x)^(s+1)/(s+1) ] + c2 x^(r+2)/(r+2)
// with s = 1/theta, r = 1/(1-theta), c1 = (1-theta)(1+s), c2 = theta(1+r).
double model_a_F(double x, double theta) {
  const double s = 1.0 / theta;
  const double r = 1.0 / (1.0 - theta);
  return -(1.0 - theta) * std::pow(1.0 - x, 1.0 + s) + theta * std::pow(x, 1.0 + r);
}

double model_a_G(double x, double theta) {
  const double s = 1.0 / theta;
  const double r = 1.0 / (1.0 - theta);
  const double c1 = (1.0 - theta) * (1.0 + s);
  const double c2 = theta * (1.0 + r);
  const double u = 1.0 - x;
  return c1 * (std::pow(u, s + 2.0) / (s + 2.0) - std::pow(u, s + 1.0) / (s + 1.0)) +
         c2 * std::pow(x, r + 2.0) / (r + 2.0);
}

double model_a_density(double x, double theta) {
  const double s = 1.0 / theta;
  const double r = 1.0 / (1.0 - theta);
  return (1.0 - theta) * (1.0 + s) * std::pow(1.0 - x, s) + theta * (1.0 + r) * std::pow(x, r);
}

double model_a_seg(double theta, double a, double b) {
  if (b <= a) return 0.0;
  return model_a_F(b, theta) - model_a_F(a, theta);
}

double model_a_xseg(double theta, double a, double b) {
  if (b <= a) return 0.0;
  return model_a_G(b, theta) - model_a_G(a, theta);
}

struct ZCache {
  std::mutex mu;
  std::map<double, double> map;

  template <typename F>
  double get(double theta, F&& compute) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = map.find(theta);
    if (it != map.end()) return it->second;
    double z = compute();
    map.emplace(theta, z);
    return z;
  }
};

// Gapped variant of model a. `suppress_low` selects which theta branch keeps
// the gap: model b suppresses theta < cut, model c suppresses theta > 1 - cut.
std::shared_ptr<detail::ModelKernel> make_gap_kernel(std::string label, double x1, double delta_c,
                                                     double plateau, double theta_cut,
                                                     bool mirror) {
  if (!(delta_c > 0.0 && delta_c < 1.0)) throw InvalidGap("gap width must lie in (0,1)");
  if (!(plateau >= 0.0)) throw InvalidGap("plateau must be nonnegative");
  const double glo = x1 - delta_c / 2.0;
  const double ghi = x1 + delta_c / 2.0;
  if (glo < 0.0 || ghi > 1.0) throw InvalidGap("gap interval leaves [0,1]");

  auto kernel = std::make_shared<detail::ModelKernel>();
  kernel->label = std::move(label);
  const double breakpoint = mirror ? 1.0 - theta_cut : theta_cut;
  kernel->breakpoints = {breakpoint};

  auto gapped = [mirror, theta_cut](double theta) {
    return mirror ? theta > 1.0 - theta_cut : theta < theta_cut;
  };
  auto z_cache = std::make_shared<ZCache>();
  auto z_of = [z_cache, glo, ghi, plateau](double theta) {
    return z_cache->get(theta, [&] {
      return 1.0 - (1.0 - plateau) * model_a_seg(theta, glo, ghi);
    });
  };

  kernel->seg = [gapped, z_of, glo, ghi, plateau](double theta, double a, double b) {
    if (!gapped(theta)) return model_a_seg(theta, a, b);
    double raw = model_a_seg(theta, a, b);
    double in_gap = model_a_seg(theta, std::max(a, glo), std::min(b, ghi));
    return (raw - (1.0 - plateau) * in_gap) / z_of(theta);
  };
  kernel->xseg = [gapped, z_of, glo, ghi, plateau](double theta, double a, double b) {
    if (!gapped(theta)) return model_a_xseg(theta, a, b);
    double raw = model_a_xseg(theta, a, b);
    double in_gap = model_a_xseg(theta, std::max(a, glo), std::min(b, ghi));
    return (raw - (1.0 - plateau) * in_gap) / z_of(theta);
  };
  kernel->density = [gapped, z_of, glo, ghi, plateau](double x, double theta) {
    double f = model_a_density(x, theta);
    if (!gapped(theta)) return f;
    bool in_gap = x > glo && x < ghi;
    return f * (in_gap ? plateau : 1.0) / z_of(theta);
  };
  return kernel;
}

}  // namespace

// ---- ModelMeasure / ParametricModel ------------------------------------------------

ModelMeasure::ModelMeasure(std::shared_ptr<const detail::ModelKernel> kernel, double theta)
    : kernel_(std::move(kernel)), theta_(theta) {}

double ModelMeasure::segment_mass(double a, double b) const {
  a = std::max(a, 0.0);
  b = std::min(b, 1.0);
  if (b <= a) return 0.0;
  return kernel_->seg(theta_, a, b);
}

double ModelMeasure::mean() const { return kernel_->xseg(theta_, 0.0, 1.0); }

GridDensity ModelMeasure::to_grid(int n_cells) const {
  const double h = 1.0 / n_cells;
  std::vector<double> cells(static_cast<std::size_t>(n_cells));
  for (int i = 0; i < n_cells; ++i)
    cells[static_cast<std::size_t>(i)] = kernel_->seg(theta_, i * h, (i + 1) * h) / h;
  return GridDensity(std::move(cells));
}

ParametricModel::ParametricModel(std::shared_ptr<const detail::ModelKernel> kernel)
    : kernel_(std::move(kernel)) {}

ModelMeasure ParametricModel::at(double theta) const {
  theta = std::clamp(theta, kernel_->domain.first, kernel_->domain.second);
  return ModelMeasure(kernel_, theta);
}

double ParametricModel::density(double x, double theta) const {
  theta = std::clamp(theta, kernel_->domain.first, kernel_->domain.second);
  return kernel_->density(x, theta);
}

const std::string& ParametricModel::label() const { return kernel_->label; }

int ParametricModel::qoi_grid_cells() const { return kernel_->qoi_cells; }

std::pair<double, double> ParametricModel::theta_domain() const { return kernel_->domain; }

const std::vector<double>& ParametricModel::theta_breakpoints() const {
  return kernel_->breakpoints;
}

ParametricModel make_model_a() {
  auto kernel = std::make_shared<detail::ModelKernel>();
  kernel->label = "model_a";
  kernel->seg = model_a_seg;
  kernel->xseg = model_a_xseg;
  kernel->density = [](double x, double theta) { return model_a_density(x, theta); };
  return ParametricModel(kernel);
}

ParametricModel make_model_b(double x1, double delta_c, double plateau, double theta_cut) {
  return ParametricModel(make_gap_kernel("model_b", x1, delta_c, plateau, theta_cut, false));
}

ParametricModel make_model_c(double x1, double delta_c, double plateau, double theta_cut) {
  return ParametricModel(make_gap_kernel("model_c", x1, delta_c, plateau, theta_cut, true));
}

ParametricModel make_uniform_model() {
  auto kernel = std::make_shared<detail::ModelKernel>();
  kernel->label = "uniform";
  kernel->seg = [](double, double a, double b) { return b <= a ? 0.0 : b - a; };
  kernel->xseg = [](double, double a, double b) { return b <= a ? 0.0 : (b * b - a * a) / 2.0; };
  kernel->density = [](double, double) { return 1.0; };
  return ParametricModel(kernel);
}

ParametricModel model_from_density(std::string label,
                                   std::function<double(double, double)> density, int n_cells) {
  auto kernel = std::make_shared<detail::ModelKernel>();
  kernel->label = std::move(label);
  kernel->qoi_cells = n_cells;

  struct GridCache {
    std::mutex mu;
    std::map<double, GridDensity> map;
  };
  auto cache = std::make_shared<GridCache>();
  auto grid_of = [cache, density, n_cells](double theta) -> const GridDensity& {
    std::lock_guard<std::mutex> lock(cache->mu);
    auto it = cache->map.find(theta);
    if (it != cache->map.end()) return it->second;
    const double h = 1.0 / n_cells;
    std::vector<double> cells(static_cast<std::size_t>(n_cells));
    long double total = 0.0L;
    for (int i = 0; i < n_cells; ++i) {
      double mid = (i + 0.5) * h;
      double v = density(mid, theta);
      if (!(v >= 0.0) || !std::isfinite(v))
        throw MeasureError("model_from_density: invalid density value");
      cells[static_cast<std::size_t>(i)] = v;
      total += v;
    }
    if (!(total > 0.0L)) throw MeasureError("model_from_density: density vanishes");
    long double scale = total * h;
    for (double& v : cells) v = static_cast<double>(v / scale);
    auto [pos, inserted] = cache->map.emplace(theta, GridDensity(std::move(cells)));
    (void)inserted;
    return pos->second;
  };

  kernel->seg = [grid_of](double theta, double a, double b) {
    return grid_of(theta).segment_mass(a, b);
  };
  kernel->xseg = [grid_of, n_cells](double theta, double a, double b) {
    const GridDensity& g = grid_of(theta);
    const double h = 1.0 / n_cells;
    a = std::max(a, 0.0);
    b = std::min(b, 1.0);
    if (b <= a) return 0.0;
    long double s = 0.0L;
    for (int i = 0; i < n_cells; ++i) {
      double ca = std::max(a, i * h);
      double cb = std::min(b, (i + 1) * h);
      if (cb <= ca) continue;
      s += static_cast<long double>(g.values()[static_cast<std::size_t>(i)]) *
           (cb * cb - ca * ca) / 2.0;
    }
    return static_cast<double>(s);
  };
  kernel->density = [grid_of, n_cells](double x, double theta) {
    const GridDensity& g = grid_of(theta);
    int cell = std::min(n_cells - 1, std::max(0, static_cast<int>(std::floor(x * n_cells))));
    return g.values()[static_cast<std::size_t>(cell)];
  };
  return ParametricModel(kernel);
}

// ---- likelihood and conditioning ------------------------------------------------------

double data_likelihood(const ParametricModel& model, double theta, const Observation& obs) {
  ModelMeasure mm = model.at(theta);
  double L = 1.0;
  for (const Ball& b : obs.balls) L *= mm.ball_mass(b);
  return L;
}

namespace {

double phi_of(const ModelMeasure& mm, const QuantityOfInterest& phi, int qoi_cells) {
  switch (phi.kind()) {
    case QuantityOfInterest::Kind::mean:
      return mm.mean();
    case QuantityOfInterest::Kind::tail_above:
      return mm.segment_mass(phi.threshold(), 1.0);
    case QuantityOfInterest::Kind::constant:
      return phi.constant_value();
    case QuantityOfInterest::Kind::custom:
      return phi(mm.to_grid(qoi_cells));
  }
  return 0.0;
}

// Self-normalizing midpoint quadrature of E[phi | .] over theta, split at the
// model's branch points, node count doubled until two successive estimates
// agree to 1e-6 (capped at 16x the initial count).
double ratio_quadrature(const ParametricModel& model, const ThetaDensity& p0,
                        const QuantityOfInterest& phi, const Observation* obs, int quad_n,
                        int qoi_cells) {
  if (quad_n < 100) throw std::invalid_argument("quadrature: quad_n must be >= 100");
  auto [lo, hi] = model.theta_domain();
  std::vector<double> cuts{lo};
  for (double b : model.theta_breakpoints())
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  const double total_len = hi - lo;

  double prev = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();
  for (int n = quad_n; n <= quad_n * 16; n *= 2) {
    long double num = 0.0L;
    long double den = 0.0L;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const double a = cuts[s];
      const double b = cuts[s + 1];
      const int m = std::max(4, static_cast<int>(std::llround(n * (b - a) / total_len)));
      const double h = (b - a) / m;
      for (int i = 0; i < m; ++i) {
        const double theta = a + (i + 0.5) * h;
        ModelMeasure mm = model.at(theta);
        double weight = p0(theta) * h;
        if (obs != nullptr)
          for (const Ball& ball : obs->balls) weight *= mm.ball_mass(ball);
        if (weight == 0.0) continue;
        den += weight;
        num += static_cast<long double>(weight) * phi_of(mm, phi, qoi_cells);
      }
    }
    if (obs != nullptr && den < 1e-300)
      throw ZeroEvidence("posterior_value: evidence below 1e-300");
    if (den <= 0.0L) throw std::invalid_argument("quadrature: prior integrates to zero");
    ratio = static_cast<double>(num / den);
    if (!std::isnan(prev) && std::fabs(ratio - prev) < 1e-6) return ratio;
    prev = ratio;
  }
  return ratio;
}

}  // namespace

double prior_value(const ParametricModel& model, const ThetaDensity& p0,
                   const QuantityOfInterest& phi, int quad_n) {
  return ratio_quadrature(model, p0, phi, nullptr, quad_n, model.qoi_grid_cells());
}

double posterior_value(const ParametricModel& model, const ThetaDensity& p0,
                       const QuantityOfInterest& phi, const Observation& obs, int quad_n) {
  return ratio_quadrature(model, p0, phi, &obs, quad_n, model.qoi_grid_cells());
}

double zeromass_sup(const ParametricModel& model, double delta, int x_grid_n, int theta_grid_n) {
  if (!(delta > 0.0)) throw std::invalid_argument("zeromass_sup: delta must be positive");
  if (x_grid_n < 2 || theta_grid_n < 1) throw std::invalid_argument("zeromass_sup: bad grid");
  auto [lo, hi] = model.theta_domain();
  double best = 0.0;
  for (int t = 0; t < theta_grid_n; ++t) {
    const double theta = lo + (hi - lo) * (t + 0.5) / theta_grid_n;
    ModelMeasure mm = model.at(theta);
    for (int i = 0; i < x_grid_n; ++i) {
      const double x = static_cast<double>(i) / (x_grid_n - 1);
      best = std::max(best, mm.ball_mass(Ball(x, delta)));
    }
  }
  return best;
}

// ---- closed forms ------------------------------------------------------------------------

double coin_posterior(int n_fair, double p_heads_fair, int n_flips) {
  if (n_fair < 0) throw std::invalid_argument("coin_posterior: n_fair must be >= 0");
  if (!(p_heads_fair > 0.0 && p_heads_fair < 1.0))
    throw std::invalid_argument("coin_posterior: p_heads_fair must lie in (0,1)");
  if (n_flips < 0) throw std::invalid_argument("coin_posterior: n_flips must be >= 0");
  return 1.0 / (1.0 + n_fair * std::pow(p_heads_fair, n_flips));
}

TailComparison gaussian_vs_chebyshev_tail(double t) {
  if (!(t > 0.0)) throw InvalidThreshold("gaussian_vs_chebyshev_tail: t must be positive");
  TailComparison out{};
  // erfc(t/sqrt(2)) equals 1 + erf(-t/sqrt(2)) without the cancellation.
  out.gaussian_tail = std::erfc(t / std::sqrt(2.0));
  out.chebyshev_tail = std::min(1.0, 1.0 / (t * t));
  out.ratio = out.chebyshev_tail / out.gaussian_tail;
  return out;
}

GaussianFit gaussian_mle_match(const std::vector<double>& samples) {
  if (samples.size() < 2) throw DegenerateData("gaussian_mle_match: need at least 2 samples");
  long double sum = 0.0L;
  for (double x : samples) sum += x;
  const double mean = static_cast<double>(sum / samples.size());
  long double ss = 0.0L;
  for (double x : samples) {
    const long double d = x - mean;
    ss += d * d;
  }
  const double variance = static_cast<double>(ss / samples.size());
  if (!(variance > 0.0)) throw DegenerateData("gaussian_mle_match: zero variance");
  return {mean, std::sqrt(variance)};
}

}  // namespace brittle_bayes
