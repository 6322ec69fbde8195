#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "brittle_bayes/bayes_core.hpp"
#include "brittle_bayes/measures.hpp"

namespace brittle_bayes {

struct UnsupportedCombination : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyClassGivenData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstructionFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Knobs for the generic finite-mixture optimizer. Extremal measures in
/// moment-type problems are finitely supported, so candidates carry few
/// support points; determinism comes from seeded multi-start.
struct OptimizerRecipe {
  int max_support_points = 5;
  int starts = 32;
  int sweeps = 60;
  std::uint64_t seed = 0;
};

/// Declarative description of a set of priors over measures on [0, 1].
///
/// Band kinds embed the observation geometry because the classes themselves
/// are defined through the probability of the observed data balls; mu0 is
/// always the uniform reference measure.
class PriorClass {
 public:
  enum class Kind { mean_constraint, likelihood_band, per_point_band, moment_class, mixture };

  /// { pi : E_{mu~pi}[E_mu[X]] = m }, 0 < m < 1.
  static PriorClass mean_constraint(double m);
  /// Mean constraint over the model class whose n-fold data probability is
  /// within a factor alpha (>= 1) of the uniform reference.
  static PriorClass likelihood_band(double alpha, double m, Observation obs);
  /// Mean constraint over the model class with each single-ball probability
  /// within a factor gamma (> 1) of the uniform reference.
  static PriorClass per_point_band(double gamma, double m, Observation obs);
  /// Priors whose pushforward under the first-k-moment map is the iterated
  /// uniform distribution on the truncated moment space, k >= 1.
  static PriorClass moment_class(int k);
  /// (1-eps) pi + eps pi1 contamination family, 0 < eps < 1.
  static PriorClass mixture(double epsilon);

  Kind kind() const { return kind_; }
  double m() const { return m_; }
  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }
  int k() const { return k_; }
  double epsilon() const { return epsilon_; }
  const std::optional<Observation>& constraint_balls() const { return obs_; }

  OptimizerRecipe recipe;

 private:
  PriorClass() = default;
  Kind kind_ = Kind::mean_constraint;
  double m_ = 0.5;
  double alpha_ = 1.0;
  double gamma_ = 2.0;
  int k_ = 1;
  double epsilon_ = 0.01;
  std::optional<Observation> obs_;
};

/// Finite mixture of discrete measures: the concrete form every witness and
/// candidate prior takes.
struct WeightedAtoms {
  std::vector<double> weights;
  std::vector<DiscreteMeasure> atoms;

  double prior_mean() const;  // E_pi[E_mu[X]]
  double prior_value(const QuantityOfInterest& phi) const;
  double evidence(const Observation& obs) const;
  /// Throws ZeroEvidence when no atom gives the data positive probability.
  double posterior_value(const QuantityOfInterest& phi, const Observation& obs) const;
};

struct Witness {
  WeightedAtoms prior;
  double achieved = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

struct BoundsResult {
  enum class Method { closed_form, optimizer };

  double lower = 0.0;
  double upper = 1.0;
  Witness witness_lower;
  Witness witness_upper;
  Method method = Method::optimizer;
  std::optional<double> gap_to_oracle;
};

// ---- closed-form evaluators -----------------------------------------------------

/// lim_{delta->0} U(Pi(alpha) | B) = 1 / (1 + alpha^-2 (a - m) / m).
double likelihood_band_posterior_upper_limit(double alpha, double a, double m);

/// lim_{delta->0} U for the per-point band with n data points: 1 / (1 + gamma^-2n).
double per_point_band_posterior_upper(double gamma, int n);

/// 1 - 4e (2 k delta / e)^(1/(2k+1)). May be negative for large delta; the raw
/// value is returned and clamping is left to callers.
double moment_class_posterior_lower_bound(int k, double delta);

// ---- bounds -----------------------------------------------------------------------

BoundsResult prior_bounds(const PriorClass& cls, const QuantityOfInterest& phi);
BoundsResult posterior_bounds(const PriorClass& cls, const QuantityOfInterest& phi,
                              const Observation& obs);

// ---- constructive witnesses -------------------------------------------------------

/// Two-atom prior over discrete measures sharing one moment vector of length k:
/// component A places zero mass on every data ball, component B keeps a small
/// mass inside each ball while pushing E[X] toward 1 (or toward 0 when
/// mirrored). The achieved posterior of phi under the mixture is returned.
struct WorstPriorResult {
  WeightedAtoms prior;
  double achieved_posterior = 0.0;
  std::vector<double> shared_moments;
  double moment_match_residual = 0.0;
  double component_a_ball_mass = 0.0;
};

WorstPriorResult construct_worst_prior_moment_class(int k, double delta, const Observation& obs,
                                                    int grid_n, std::uint64_t seed,
                                                    bool toward_zero = false,
                                                    const QuantityOfInterest& phi =
                                                        QuantityOfInterest::mean());

// ---- qualitative-robustness flip --------------------------------------------------

/// Finite categorical world for the contamination demo: a data-generating
/// distribution nu on `cells` cells and a base prior whose atoms all sit at
/// TV distance >= tau from nu.
struct FlipSetup {
  DiscreteMeasure nu;
  WeightedAtoms base_prior;
  double tau = 0.2;
};

FlipSetup make_default_flip_setup(int cells, double tau, std::uint64_t seed);

struct FlipResult {
  double posterior_mass_near_truth_base = 0.0;
  double posterior_mass_near_truth_mixed = 0.0;
  double tv_base_mixed = 0.0;
};

/// Mixes epsilon of a point prior at nu into the base prior, draws n i.i.d.
/// samples from nu, and reports the posterior mass within TV tau/2 of nu under
/// both priors. TV(pi, pi') <= epsilon by construction and is returned.
FlipResult mixture_flip_demo(double epsilon, const FlipSetup& setup, int n, std::uint64_t seed);

}  // namespace brittle_bayes
