#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "brittle_bayes/measures.hpp"

namespace brittle_bayes {

struct InvalidGap : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ZeroEvidence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateData : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// n observation balls (centers x_1..x_n with per-ball radius). Balls are kept
/// in canonical (center, radius) order so likelihood products do not depend on
/// the caller's labeling.
struct Observation {
  std::vector<Ball> balls;

  Observation(const std::vector<double>& centers, double radius);
  explicit Observation(std::vector<Ball> balls_);

  int n() const { return static_cast<int>(balls.size()); }
};

/// Real-valued functional of a measure. The kind tag lets closed-form
/// evaluators recognize the functionals they have formulas for; `custom`
/// functionals always go through the generic numeric paths.
class QuantityOfInterest {
 public:
  enum class Kind { mean, tail_above, constant, custom };

  static QuantityOfInterest mean();
  /// mu([a, 1]); the boundary point a is included.
  static QuantityOfInterest tail_above(double threshold);
  static QuantityOfInterest constant(double value);
  static QuantityOfInterest custom(std::string label,
                                   std::function<double(const DiscreteMeasure&)> on_discrete,
                                   std::function<double(const GridDensity&)> on_grid);

  double operator()(const DiscreteMeasure& m) const;
  double operator()(const GridDensity& g) const;

  Kind kind() const { return kind_; }
  double threshold() const { return threshold_; }
  double constant_value() const { return constant_; }
  const std::string& label() const { return label_; }

  /// -phi, used by lower-bound searches. Fast-path kinds degrade to custom.
  QuantityOfInterest negated() const;

 private:
  QuantityOfInterest() = default;
  Kind kind_ = Kind::custom;
  double threshold_ = 0.0;
  double constant_ = 0.0;
  std::string label_;
  std::function<double(const DiscreteMeasure&)> on_discrete_;
  std::function<double(const GridDensity&)> on_grid_;
};

namespace detail {
struct ModelKernel;
}

/// One member measure mu(theta) of a parametric family. Segment masses and the
/// mean are exact (antiderivative-based) for the built-in families, so ball
/// likelihoods do not inherit quadrature error.
class ModelMeasure {
 public:
  double theta() const { return theta_; }
  /// Integral of the density over [a, b].
  double segment_mass(double a, double b) const;
  double ball_mass(const Ball& b) const { return segment_mass(b.lo(), b.hi()); }
  double mean() const;
  GridDensity to_grid(int n_cells = GridDensity::kDefaultCells) const;

 private:
  friend class ParametricModel;
  ModelMeasure(std::shared_ptr<const detail::ModelKernel> kernel, double theta);
  std::shared_ptr<const detail::ModelKernel> kernel_;
  double theta_;
};

/// Family theta -> density f(x, theta) on [0, 1]. Immutable after
/// construction; handles returned by at() are safe to share across threads.
class ParametricModel {
 public:
  ModelMeasure at(double theta) const;
  double density(double x, double theta) const;

  const std::string& label() const;
  /// Grid resolution handed to custom functionals during quadrature.
  int qoi_grid_cells() const;
  /// Numerically safe theta range; quadratures clamp to it.
  std::pair<double, double> theta_domain() const;
  /// Interior points where the map theta -> mu(theta) switches branch;
  /// quadratures split at these.
  const std::vector<double>& theta_breakpoints() const;

 private:
  friend ParametricModel make_model_a();
  friend ParametricModel make_model_b(double, double, double, double);
  friend ParametricModel make_model_c(double, double, double, double);
  friend ParametricModel make_uniform_model();
  friend ParametricModel model_from_density(std::string,
                                            std::function<double(double, double)>, int);
  explicit ParametricModel(std::shared_ptr<const detail::ModelKernel> kernel);
  std::shared_ptr<const detail::ModelKernel> kernel_;
};

/// Two-sided beta-like family on theta in (0, 1):
///   f(x,theta) = (1-theta)(1+1/theta)(1-x)^(1/theta)
///              + theta(1+1/(1-theta)) x^(1/(1-theta)).
/// Mass drifts toward 1 as theta -> 1 and toward 0 as theta -> 0.
ParametricModel make_model_a();

/// Model a with the density suppressed by `plateau` on the gap
/// (x1 - delta_c/2, x1 + delta_c/2) and renormalized, for theta < theta_cut;
/// untouched for theta >= theta_cut. Throws InvalidGap if the gap leaves [0,1].
ParametricModel make_model_b(double x1 = 0.5, double delta_c = 0.01, double plateau = 1e-9,
                             double theta_cut = 0.999);

/// Mirror of model b: the gap applies for theta > 1 - theta_cut, so only the
/// low-theta branch (mass toward zero) survives conditioning on data near x1.
ParametricModel make_model_c(double x1 = 0.5, double delta_c = 0.01, double plateau = 1e-9,
                             double theta_cut = 0.999);

/// f(x, theta) = 1 for every theta. Handy as a reference model in tests.
ParametricModel make_uniform_model();

/// Wraps an arbitrary nonnegative density; cells are midpoint-sampled on
/// n_cells and renormalized per theta, so every mu(theta) integrates to 1
/// exactly on its own grid.
ParametricModel model_from_density(std::string label,
                                   std::function<double(double, double)> density,
                                   int n_cells = 2000);

using ThetaDensity = std::function<double(double)>;

inline ThetaDensity uniform_theta_prior() {
  return [](double) { return 1.0; };
}

/// Product over observation balls of mu(theta)[B_delta(x_i)].
double data_likelihood(const ParametricModel& model, double theta, const Observation& obs);

/// E_{theta ~ p0}[phi(mu(theta))] by composite midpoint quadrature on the
/// clamped theta-domain, with the node count doubled until two successive
/// estimates differ by less than 1e-6. Self-normalizing, so constants pass
/// through exactly.
double prior_value(const ParametricModel& model, const ThetaDensity& p0,
                   const QuantityOfInterest& phi, int quad_n = 4000);

/// Conditional expectation of phi given d in B: the ratio of the quadratures
/// of phi * likelihood * p0 and likelihood * p0. Throws ZeroEvidence when the
/// evidence integral falls below 1e-300.
double posterior_value(const ParametricModel& model, const ThetaDensity& p0,
                       const QuantityOfInterest& phi, const Observation& obs, int quad_n = 4000);

/// max over a sampled (x, theta) grid of mu(theta)[B_delta(x)]. Theta is
/// sampled at cell midpoints of the clamped domain, so this is a lower
/// estimate of the true sup (the clamp edges are excluded by construction).
double zeromass_sup(const ParametricModel& model, double delta, int x_grid_n = 200,
                    int theta_grid_n = 100);

// ---- closed forms ------------------------------------------------------------

/// Posterior probability of the always-heads coin after n_flips heads:
/// 1 / (1 + n_fair * p_heads_fair^n_flips).
double coin_posterior(int n_fair, double p_heads_fair, int n_flips);

struct TailComparison {
  double gaussian_tail;   // 1 + erf(-t/sqrt(2))
  double chebyshev_tail;  // min{1, 1/t^2}
  double ratio;           // chebyshev / gaussian
};
TailComparison gaussian_vs_chebyshev_tail(double t);

/// Maximizer of the Gaussian expected log-likelihood against the empirical
/// measure: sample mean and population-convention standard deviation.
struct GaussianFit {
  double mean;
  double stddev;
};
GaussianFit gaussian_mle_match(const std::vector<double>& samples);

}  // namespace brittle_bayes
