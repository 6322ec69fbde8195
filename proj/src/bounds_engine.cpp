#include "brittle_bayes/bounds_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "brittle_bayes/rng.hpp"
#include "brittle_bayes/simplex.hpp"

namespace brittle_bayes {

// ---- PriorClass -------------------------------------------------------------------

PriorClass PriorClass::mean_constraint(double m) {
  // m > 1 describes an empty class: constructible so that searches can report
  // infeasibility, but the bounds evaluators reject it.
  if (!(m > 0.0) || !std::isfinite(m))
    throw std::invalid_argument("PriorClass: mean constraint requires m > 0");
  PriorClass c;
  c.kind_ = Kind::mean_constraint;
  c.m_ = m;
  return c;
}

PriorClass PriorClass::likelihood_band(double alpha, double m, Observation obs) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("PriorClass: alpha must be >= 1");
  if (!(m > 0.0 && m < 1.0)) throw std::invalid_argument("PriorClass: requires 0 < m < 1");
  PriorClass c;
  c.kind_ = Kind::likelihood_band;
  c.alpha_ = alpha;
  c.m_ = m;
  c.obs_ = std::move(obs);
  return c;
}

PriorClass PriorClass::per_point_band(double gamma, double m, Observation obs) {
  if (!(gamma > 1.0)) throw std::invalid_argument("PriorClass: gamma must be > 1");
  if (!(m > 0.0 && m < 1.0)) throw std::invalid_argument("PriorClass: requires 0 < m < 1");
  PriorClass c;
  c.kind_ = Kind::per_point_band;
  c.gamma_ = gamma;
  c.m_ = m;
  c.obs_ = std::move(obs);
  return c;
}

PriorClass PriorClass::moment_class(int k) {
  if (k < 1) throw std::invalid_argument("PriorClass: moment class requires k >= 1");
  PriorClass c;
  c.kind_ = Kind::moment_class;
  c.k_ = k;
  return c;
}

PriorClass PriorClass::mixture(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("PriorClass: mixture requires 0 < epsilon < 1");
  PriorClass c;
  c.kind_ = Kind::mixture;
  c.epsilon_ = epsilon;
  return c;
}

// ---- WeightedAtoms -------------------------------------------------------------------

double WeightedAtoms::prior_mean() const {
  long double s = 0.0L;
  for (std::size_t j = 0; j < atoms.size(); ++j)
    s += static_cast<long double>(weights[j]) * atoms[j].mean();
  return static_cast<double>(s);
}

double WeightedAtoms::prior_value(const QuantityOfInterest& phi) const {
  long double s = 0.0L;
  for (std::size_t j = 0; j < atoms.size(); ++j)
    s += static_cast<long double>(weights[j]) * phi(atoms[j]);
  return static_cast<double>(s);
}

double WeightedAtoms::evidence(const Observation& obs) const {
  long double s = 0.0L;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    double L = 1.0;
    for (const Ball& b : obs.balls) L *= ball_mass(atoms[j], b);
    s += static_cast<long double>(weights[j]) * L;
  }
  return static_cast<double>(s);
}

double WeightedAtoms::posterior_value(const QuantityOfInterest& phi, const Observation& obs) const {
  long double num = 0.0L;
  long double den = 0.0L;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    double L = 1.0;
    for (const Ball& b : obs.balls) L *= ball_mass(atoms[j], b);
    if (L == 0.0) continue;
    den += static_cast<long double>(weights[j]) * L;
    num += static_cast<long double>(weights[j]) * L * phi(atoms[j]);
  }
  if (den < 1e-300L) throw ZeroEvidence("WeightedAtoms: no atom gives the data positive mass");
  return static_cast<double>(num / den);
}

// ---- closed forms ----------------------------------------------------------------------

double likelihood_band_posterior_upper_limit(double alpha, double a, double m) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("alpha must be >= 1");
  if (!(m > 0.0 && m < 1.0 && a > 0.0 && a < 1.0))
    throw std::invalid_argument("requires a, m in (0,1)");
  return 1.0 / (1.0 + (a - m) / (m * alpha * alpha));
}

double per_point_band_posterior_upper(double gamma, int n) {
  if (!(gamma > 1.0)) throw std::invalid_argument("gamma must be > 1");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return 1.0 / (1.0 + std::pow(gamma, -2.0 * n));
}

double moment_class_posterior_lower_bound(int k, double delta) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  const double e = std::numbers::e_v<double>;
  return 1.0 - 4.0 * e * std::pow(2.0 * k * delta / e, 1.0 / (2.0 * k + 1.0));
}

// ---- generic pair optimizer ---------------------------------------------------------------
//
// Candidates are two-atom mixtures. Each atom is a discrete measure with a
// designated mass inside every constraint ball plus a few free bulk points;
// the mixture weight is pinned by the mean constraint, which makes each
// candidate a class member by construction. Multi-start coordinate descent
// with shrinking steps; deterministic given the seed, ties keep the earliest
// start.

namespace {

struct AtomParams {
  std::vector<double> ball_mass;
  std::vector<double> bulk_x;
  std::vector<double> bulk_raw;
};

struct SearchSetup {
  const PriorClass* cls = nullptr;
  const QuantityOfInterest* phi = nullptr;
  const Observation* evidence = nullptr;  // null: prior objective
  std::vector<Ball> balls;                // constraint + evidence balls
  double direction = 1.0;
};

double ball_reference_mass(const Ball& b) { return b.hi() - b.lo(); }

// Clamps the designated ball masses into the class band (rescaling the whole
// product for the n-fold band) and keeps the total below 0.9.
void repair_ball_masses(const SearchSetup& s, AtomParams& p) {
  const std::size_t n = s.balls.size();
  if (n == 0) return;
  const double per_ball_cap = 0.9 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    p.ball_mass[i] = std::clamp(p.ball_mass[i], 1e-12, per_ball_cap);

  switch (s.cls->kind()) {
    case PriorClass::Kind::per_point_band: {
      const double g = s.cls->gamma();
      for (std::size_t i = 0; i < n; ++i) {
        const double mu0 = ball_reference_mass(s.balls[i]);
        p.ball_mass[i] = std::clamp(p.ball_mass[i], mu0 / g, g * mu0);
      }
      break;
    }
    case PriorClass::Kind::likelihood_band: {
      double l0 = 1.0;
      for (const Ball& b : s.balls) l0 *= ball_reference_mass(b);
      const double lo = l0 / s.cls->alpha();
      const double hi = l0 * s.cls->alpha();
      double prod = 1.0;
      for (double v : p.ball_mass) prod *= v;
      double target = std::clamp(prod, lo, hi);
      if (prod <= 0.0) {
        const double even = std::pow(target, 1.0 / static_cast<double>(n));
        for (double& v : p.ball_mass) v = even;
      } else if (target != prod) {
        const double scale = std::pow(target / prod, 1.0 / static_cast<double>(n));
        for (double& v : p.ball_mass) v *= scale;
      }
      break;
    }
    default:
      break;
  }
}

// Bulk points must not sit inside any ball, or the designated ball masses
// would be off. Open balls, so the boundary itself is fine.
double project_off_balls(const SearchSetup& s, double x) {
  for (const Ball& b : s.balls) {
    if (!b.contains(x)) continue;
    const double left = b.center - b.radius;
    const double right = b.center + b.radius;
    const bool left_ok = left >= 0.0;
    const bool right_ok = right <= 1.0;
    if (left_ok && (!right_ok || x - left <= right - x))
      x = left;
    else if (right_ok)
      x = right;
    else
      return -1.0;  // ball swallows [0,1]
  }
  return x;
}

DiscreteMeasure build_atom(const SearchSetup& s, const AtomParams& p) {
  std::vector<double> xs;
  std::vector<double> ws;
  double s_total = 0.0;
  for (std::size_t i = 0; i < s.balls.size(); ++i) {
    xs.push_back(s.balls[i].center);
    ws.push_back(p.ball_mass[i]);
    s_total += p.ball_mass[i];
  }
  const double bulk_total = 1.0 - s_total;
  double raw_sum = 0.0;
  for (double r : p.bulk_raw) raw_sum += r;
  for (std::size_t j = 0; j < p.bulk_x.size(); ++j) {
    xs.push_back(p.bulk_x[j]);
    double share = raw_sum > 0.0 ? p.bulk_raw[j] / raw_sum : (j == 0 ? 1.0 : 0.0);
    ws.push_back(share * bulk_total);
  }
  return DiscreteMeasure::normalized(std::move(xs), std::move(ws));
}

struct PairEval {
  bool valid = false;
  bool zero_evidence = false;
  double value = 0.0;
  WeightedAtoms mixture;
};

PairEval evaluate_pair(const SearchSetup& s, const AtomParams& p1, const AtomParams& p2) {
  PairEval out;
  DiscreteMeasure a1 = build_atom(s, p1);
  DiscreteMeasure a2 = build_atom(s, p2);
  const double e1 = a1.mean();
  const double e2 = a2.mean();
  const double m = s.cls->m();
  double w;
  if (std::fabs(e1 - e2) < 1e-12) {
    if (std::fabs(e1 - m) > 1e-9) return out;
    w = 0.5;
  } else {
    w = (m - e2) / (e1 - e2);
    if (w < 0.0 || w > 1.0) return out;
  }
  out.mixture.weights = {w, 1.0 - w};
  out.mixture.atoms = {std::move(a1), std::move(a2)};
  if (s.evidence == nullptr) {
    out.value = s.direction * out.mixture.prior_value(*s.phi);
    out.valid = true;
    return out;
  }
  try {
    out.value = s.direction * out.mixture.posterior_value(*s.phi, *s.evidence);
  } catch (const ZeroEvidence&) {
    out.zero_evidence = true;
    return out;
  }
  out.valid = true;
  return out;
}

AtomParams random_atom(const SearchSetup& s, Rng& rng, int bulk_points) {
  AtomParams p;
  p.ball_mass.resize(s.balls.size());
  for (std::size_t i = 0; i < s.balls.size(); ++i) {
    const double mu0 = ball_reference_mass(s.balls[i]);
    // log-uniform around the reference mass; repair clamps into the band
    p.ball_mass[i] = mu0 * std::pow(10.0, rng.uniform(-2.0, 2.0));
  }
  p.bulk_x.resize(static_cast<std::size_t>(bulk_points));
  p.bulk_raw.resize(static_cast<std::size_t>(bulk_points));
  for (int j = 0; j < bulk_points; ++j) {
    double x = project_off_balls(s, rng.uniform());
    p.bulk_x[static_cast<std::size_t>(j)] = x < 0.0 ? 0.0 : x;
    p.bulk_raw[static_cast<std::size_t>(j)] = rng.uniform();
  }
  repair_ball_masses(s, p);
  return p;
}

struct SearchResult {
  bool found = false;
  bool saw_zero_evidence = false;
  double value = 0.0;
  WeightedAtoms witness;
};

SearchResult pair_search(const SearchSetup& s, const OptimizerRecipe& recipe) {
  SearchResult best;
  const int bulk_points =
      std::max(1, recipe.max_support_points - static_cast<int>(s.balls.size()));

  for (int start = 0; start < recipe.starts; ++start) {
    Rng rng(derive_seed(recipe.seed, "pair_search/" + std::to_string(start)));
    AtomParams p1 = random_atom(s, rng, bulk_points);
    AtomParams p2 = random_atom(s, rng, bulk_points);
    PairEval cur = evaluate_pair(s, p1, p2);
    if (cur.zero_evidence) best.saw_zero_evidence = true;

    double step = 0.25;
    for (int sweep = 0; sweep < recipe.sweeps && step > 1e-10; ++sweep) {
      bool improved = false;
      for (int which = 0; which < 2; ++which) {
        AtomParams& p = which == 0 ? p1 : p2;
        // ball-mass coordinates move multiplicatively (bands span decades)
        for (std::size_t i = 0; i < p.ball_mass.size(); ++i) {
          for (double factor : {1.0 + step, 1.0 / (1.0 + step)}) {
            AtomParams trial = p;
            trial.ball_mass[i] *= factor;
            repair_ball_masses(s, trial);
            PairEval ev = which == 0 ? evaluate_pair(s, trial, p2) : evaluate_pair(s, p1, trial);
            if (ev.zero_evidence) best.saw_zero_evidence = true;
            if (ev.valid && (!cur.valid || ev.value > cur.value + 1e-15)) {
              p = trial;
              cur = ev;
              improved = true;
            }
          }
        }
        for (std::size_t j = 0; j < p.bulk_x.size(); ++j) {
          for (double delta : {step, -step}) {
            AtomParams trial = p;
            double x = std::clamp(trial.bulk_x[j] + delta, 0.0, 1.0);
            x = project_off_balls(s, x);
            if (x < 0.0) continue;
            trial.bulk_x[j] = x;
            PairEval ev = which == 0 ? evaluate_pair(s, trial, p2) : evaluate_pair(s, p1, trial);
            if (ev.zero_evidence) best.saw_zero_evidence = true;
            if (ev.valid && (!cur.valid || ev.value > cur.value + 1e-15)) {
              p = trial;
              cur = ev;
              improved = true;
            }
          }
          for (double delta : {step, -step}) {
            AtomParams trial = p;
            trial.bulk_raw[j] = std::max(0.0, trial.bulk_raw[j] + delta);
            PairEval ev = which == 0 ? evaluate_pair(s, trial, p2) : evaluate_pair(s, p1, trial);
            if (ev.zero_evidence) best.saw_zero_evidence = true;
            if (ev.valid && (!cur.valid || ev.value > cur.value + 1e-15)) {
              p = trial;
              cur = ev;
              improved = true;
            }
          }
        }
      }
      if (!improved) step *= 0.5;
    }

    if (cur.valid && (!best.found || cur.value > best.value)) {
      best.found = true;
      best.value = cur.value;
      best.witness = cur.mixture;
    }
  }
  return best;
}

Witness to_witness(const SearchResult& r, double direction, const std::string& note) {
  Witness w;
  w.prior = r.witness;
  w.achieved = direction * r.value;
  w.note = note;
  return w;
}

// Runs the pair optimizer in one direction for the given class.
SearchResult run_search(const PriorClass& cls, const QuantityOfInterest& phi,
                        const Observation* evidence, double direction) {
  SearchSetup s;
  s.cls = &cls;
  s.phi = &phi;
  s.evidence = evidence;
  s.direction = direction;
  if (cls.constraint_balls().has_value())
    s.balls = cls.constraint_balls()->balls;
  else if (evidence != nullptr)
    s.balls = evidence->balls;
  return pair_search(s, cls.recipe);
}

}  // namespace

// ---- bounds dispatch --------------------------------------------------------------------

namespace {

void require_matching_balls(const PriorClass& cls, const Observation& obs) {
  if (!cls.constraint_balls().has_value()) return;
  const auto& cb = cls.constraint_balls()->balls;
  if (cb.size() != obs.balls.size())
    throw std::invalid_argument("posterior_bounds: observation differs from the class balls");
  for (std::size_t i = 0; i < cb.size(); ++i)
    if (cb[i].center != obs.balls[i].center || cb[i].radius != obs.balls[i].radius)
      throw std::invalid_argument("posterior_bounds: observation differs from the class balls");
}

Witness closed_form_mean_tail_witness(double m, double a) {
  // mass m/a at a and the rest at 0 attains U = m/a; a point mass at m
  // attains U = 1 when m >= a.
  Witness w;
  if (m >= a) {
    w.prior.weights = {1.0};
    w.prior.atoms = {DiscreteMeasure::point_mass(m)};
    w.achieved = 1.0;
  } else {
    w.prior.weights = {m / a, 1.0 - m / a};
    w.prior.atoms = {DiscreteMeasure::point_mass(a), DiscreteMeasure::point_mass(0.0)};
    w.achieved = m / a;
  }
  w.note = "closed-form witness";
  return w;
}

}  // namespace

BoundsResult prior_bounds(const PriorClass& cls, const QuantityOfInterest& phi) {
  if (cls.kind() == PriorClass::Kind::mixture)
    throw UnsupportedCombination("prior_bounds: mixture classes have no bounds evaluator");

  BoundsResult res;
  if (phi.kind() == QuantityOfInterest::Kind::constant) {
    res.lower = res.upper = phi.constant_value();
    res.method = BoundsResult::Method::closed_form;
    res.witness_lower.note = res.witness_upper.note = "constant functional";
    res.witness_lower.achieved = res.witness_upper.achieved = phi.constant_value();
    return res;
  }

  switch (cls.kind()) {
    case PriorClass::Kind::mean_constraint: {
      if (cls.m() > 1.0)
        throw UnsupportedCombination("prior_bounds: class is empty (m > 1)");
      if (phi.kind() == QuantityOfInterest::Kind::mean) {
        res.lower = res.upper = cls.m();
        res.method = BoundsResult::Method::closed_form;
        Witness w;
        w.prior.weights = {1.0};
        w.prior.atoms = {DiscreteMeasure::point_mass(cls.m())};
        w.achieved = cls.m();
        w.note = "mean is pinned by the class";
        res.witness_lower = res.witness_upper = w;
        return res;
      }
      if (phi.kind() == QuantityOfInterest::Kind::tail_above) {
        const double a = phi.threshold();
        res.upper = std::min(1.0, cls.m() / a);
        res.witness_upper = closed_form_mean_tail_witness(cls.m(), a);
        res.method = BoundsResult::Method::closed_form;
        SearchResult lo = run_search(cls, phi, nullptr, -1.0);
        if (lo.found) {
          res.lower = -lo.value;
          res.witness_lower = to_witness(lo, -1.0, "optimizer witness (lower side has no closed form)");
        } else {
          res.lower = 0.0;
        }
        return res;
      }
      // custom functional: optimizer both sides
      SearchResult hi = run_search(cls, phi, nullptr, 1.0);
      SearchResult lo = run_search(cls, phi, nullptr, -1.0);
      if (!hi.found || !lo.found)
        throw UnsupportedCombination("prior_bounds: optimizer found no feasible candidate");
      res.upper = hi.value;
      res.lower = -lo.value;
      res.witness_upper = to_witness(hi, 1.0, "optimizer witness");
      res.witness_lower = to_witness(lo, -1.0, "optimizer witness");
      res.method = BoundsResult::Method::optimizer;
      return res;
    }
    case PriorClass::Kind::likelihood_band:
    case PriorClass::Kind::per_point_band: {
      SearchResult hi = run_search(cls, phi, nullptr, 1.0);
      SearchResult lo = run_search(cls, phi, nullptr, -1.0);
      if (!hi.found || !lo.found)
        throw UnsupportedCombination("prior_bounds: optimizer found no feasible candidate");
      res.upper = hi.value;
      res.lower = -lo.value;
      res.witness_upper = to_witness(hi, 1.0, "optimizer witness");
      res.witness_lower = to_witness(lo, -1.0, "optimizer witness");
      res.method = BoundsResult::Method::optimizer;
      return res;
    }
    case PriorClass::Kind::moment_class: {
      if (phi.kind() == QuantityOfInterest::Kind::mean) {
        // Every member pushes the first moment forward to Uniform[0,1], so the
        // prior value of the mean is 1/2 for the whole class.
        res.lower = res.upper = 0.5;
        res.method = BoundsResult::Method::closed_form;
        res.witness_lower.achieved = res.witness_upper.achieved = 0.5;
        res.witness_lower.note = res.witness_upper.note =
            "every class member attains 1/2; witnesses are infinite mixtures";
        return res;
      }
      throw UnsupportedCombination("prior_bounds: moment class supports the mean functional");
    }
    default:
      throw UnsupportedCombination("prior_bounds: unsupported class");
  }
}

BoundsResult posterior_bounds(const PriorClass& cls, const QuantityOfInterest& phi,
                              const Observation& obs) {
  if (cls.kind() == PriorClass::Kind::mixture)
    throw UnsupportedCombination("posterior_bounds: mixture classes have no bounds evaluator");
  require_matching_balls(cls, obs);

  BoundsResult res;
  if (phi.kind() == QuantityOfInterest::Kind::constant) {
    res.lower = res.upper = phi.constant_value();
    res.method = BoundsResult::Method::closed_form;
    res.witness_lower.note = res.witness_upper.note = "constant functional";
    res.witness_lower.achieved = res.witness_upper.achieved = phi.constant_value();
    return res;
  }

  if (cls.kind() == PriorClass::Kind::moment_class) {
    if (phi.kind() != QuantityOfInterest::Kind::mean)
      throw UnsupportedCombination("posterior_bounds: moment class supports the mean functional");
    WorstPriorResult up = construct_worst_prior_moment_class(cls.k(), obs.balls[0].radius, obs,
                                                             2001, cls.recipe.seed, false, phi);
    WorstPriorResult down = construct_worst_prior_moment_class(cls.k(), obs.balls[0].radius, obs,
                                                               2001, cls.recipe.seed, true, phi);
    res.upper = up.achieved_posterior;
    res.lower = down.achieved_posterior;
    res.witness_upper.prior = up.prior;
    res.witness_upper.achieved = up.achieved_posterior;
    res.witness_upper.note = "constructed two-atom near-worst prior";
    res.witness_lower.prior = down.prior;
    res.witness_lower.achieved = down.achieved_posterior;
    res.witness_lower.note = "mirrored construction";
    res.method = BoundsResult::Method::optimizer;
    return res;
  }

  SearchResult hi = run_search(cls, phi, &obs, 1.0);
  SearchResult lo = run_search(cls, phi, &obs, -1.0);
  if (!hi.found || !lo.found) {
    if (hi.saw_zero_evidence || lo.saw_zero_evidence)
      throw EmptyClassGivenData("posterior_bounds: every candidate gives the data zero mass");
    throw UnsupportedCombination("posterior_bounds: optimizer found no feasible candidate");
  }

  const bool tail = phi.kind() == QuantityOfInterest::Kind::tail_above;
  if (cls.kind() == PriorClass::Kind::likelihood_band && tail) {
    res.upper = likelihood_band_posterior_upper_limit(cls.alpha(), phi.threshold(), cls.m());
    res.method = BoundsResult::Method::closed_form;
  } else if (cls.kind() == PriorClass::Kind::per_point_band && tail) {
    res.upper = per_point_band_posterior_upper(cls.gamma(), obs.n());
    res.method = BoundsResult::Method::closed_form;
  } else {
    res.upper = hi.value;
    res.method = BoundsResult::Method::optimizer;
  }
  res.lower = -lo.value;
  res.witness_upper = to_witness(hi, 1.0,
                                 res.method == BoundsResult::Method::closed_form
                                     ? "finite-delta optimizer witness; the bound is the delta->0 limit"
                                     : "optimizer witness");
  res.witness_lower = to_witness(lo, -1.0, "optimizer witness");
  if (res.lower > res.upper) res.lower = res.upper;  // optimizer slack on degenerate classes
  return res;
}

// ---- constructive near-worst prior for the moment class -----------------------------------

WorstPriorResult construct_worst_prior_moment_class(int k, double delta, const Observation& obs,
                                                    int grid_n, std::uint64_t seed,
                                                    bool toward_zero,
                                                    const QuantityOfInterest& phi) {
  if (k < 1) throw std::invalid_argument("construct_worst_prior: k must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("construct_worst_prior: delta must be positive");
  if (grid_n < 100) throw std::invalid_argument("construct_worst_prior: grid_n must be >= 100");

  auto inside_some_ball = [&](double x) {
    for (const Ball& b : obs.balls)
      if (b.contains(x)) return true;
    return false;
  };

  // Component B: bulk mass at y (just shy of the pushed end), small mass at
  // each ball center so the data stays possible.
  double y;
  if (!toward_zero) {
    double lo_edge = obs.balls.back().center + delta;
    if (lo_edge >= 1.0 - 1e-9)
      throw ConstructionFailed("construct_worst_prior: no room above the data balls");
    y = std::max(lo_edge, 0.999);
    if (y >= 1.0) y = 0.5 * (lo_edge + 1.0);
  } else {
    double hi_edge = obs.balls.front().center - delta;
    if (hi_edge <= 1e-9)
      throw ConstructionFailed("construct_worst_prior: no room below the data balls");
    y = std::min(hi_edge, 0.001);
    if (y <= 0.0) y = 0.5 * hi_edge;
  }
  const double s_total = 1e-3;
  const double s_each = s_total / obs.n();
  std::vector<double> b_pts;
  std::vector<double> b_wts;
  for (const Ball& b : obs.balls) {
    b_pts.push_back(b.center);
    b_wts.push_back(s_each);
  }
  b_pts.push_back(y);
  b_wts.push_back(1.0 - s_total);
  DiscreteMeasure component_b = DiscreteMeasure::normalized(std::move(b_pts), std::move(b_wts));
  std::vector<double> q = moment_map(component_b, k);

  // Component A: same moments, zero mass on every open ball. Solved as an LP
  // feasibility problem over off-ball grid points plus anchors near the ball
  // boundaries (which is where the mass swap has to happen).
  std::vector<double> points;
  auto add_point = [&](double x) {
    if (x < 0.0 || x > 1.0 || inside_some_ball(x)) return;
    points.push_back(x);
  };
  add_point(0.0);
  add_point(1.0);
  add_point(y);
  for (const Ball& b : obs.balls) {
    add_point(b.center - 2.0 * b.radius);
    add_point(b.center + 2.0 * b.radius);
    add_point(b.center - 3.0 * b.radius);
    add_point(b.center + 3.0 * b.radius);
  }
  for (int i = 0; i < grid_n; ++i) add_point(static_cast<double>(i) / (grid_n - 1));
  Rng rng(derive_seed(seed, "construct_worst_prior"));
  for (int i = 0; i < 50; ++i) add_point(rng.uniform());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.empty())
    throw ConstructionFailed("construct_worst_prior: data balls cover the whole interval");

  const std::size_t cols = points.size();
  std::vector<std::vector<double>> a_mat(static_cast<std::size_t>(k + 1),
                                         std::vector<double>(cols));
  std::vector<double> rhs(static_cast<std::size_t>(k + 1));
  for (std::size_t c = 0; c < cols; ++c) {
    double p = 1.0;
    a_mat[0][c] = 1.0;
    for (int l = 1; l <= k; ++l) {
      p *= points[c];
      a_mat[static_cast<std::size_t>(l)][c] = p;
    }
  }
  rhs[0] = 1.0;
  for (int l = 1; l <= k; ++l) rhs[static_cast<std::size_t>(l)] = q[static_cast<std::size_t>(l - 1)];

  LpResult lp = solve_equality_lp(a_mat, rhs, std::vector<double>(cols, 0.0));
  if (lp.status != LpResult::Status::optimal)
    throw ConstructionFailed("construct_worst_prior: no off-ball measure matches the moments");

  std::vector<double> a_pts;
  std::vector<double> a_wts;
  for (std::size_t c = 0; c < cols; ++c) {
    if (lp.x[c] > 1e-14) {
      a_pts.push_back(points[c]);
      a_wts.push_back(lp.x[c]);
    }
  }
  DiscreteMeasure component_a = DiscreteMeasure::normalized(std::move(a_pts), std::move(a_wts));

  WorstPriorResult out;
  out.shared_moments = q;
  std::vector<double> qa = moment_map(component_a, k);
  for (int l = 0; l < k; ++l)
    out.moment_match_residual = std::max(
        out.moment_match_residual,
        std::fabs(qa[static_cast<std::size_t>(l)] - q[static_cast<std::size_t>(l)]));
  if (out.moment_match_residual > 1e-6)
    throw ConstructionFailed("construct_worst_prior: moment match above 1e-6");
  for (const Ball& b : obs.balls)
    out.component_a_ball_mass = std::max(out.component_a_ball_mass, ball_mass(component_a, b));
  if (out.component_a_ball_mass >= 1e-9)
    throw ConstructionFailed("construct_worst_prior: component A leaks mass into a ball");

  out.prior.weights = {0.5, 0.5};
  out.prior.atoms = {component_a, component_b};
  out.achieved_posterior = out.prior.posterior_value(phi, obs);
  return out;
}

// ---- qualitative-robustness flip ------------------------------------------------------------

namespace {

DiscreteMeasure random_categorical(int cells, Rng& rng) {
  std::vector<double> pts(static_cast<std::size_t>(cells));
  std::vector<double> wts(static_cast<std::size_t>(cells));
  for (int i = 0; i < cells; ++i) {
    pts[static_cast<std::size_t>(i)] = (i + 0.5) / cells;
    wts[static_cast<std::size_t>(i)] = 0.05 + rng.uniform();
  }
  return DiscreteMeasure::normalized(std::move(pts), std::move(wts));
}

}  // namespace

FlipSetup make_default_flip_setup(int cells, double tau, std::uint64_t seed) {
  if (cells < 2) throw std::invalid_argument("flip setup: need at least 2 cells");
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("flip setup: tau in (0,1)");
  Rng rng(derive_seed(seed, "flip_setup"));
  FlipSetup setup{random_categorical(cells, rng), {}, tau};
  const int atom_count = 6;
  int guard = 0;
  while (static_cast<int>(setup.base_prior.atoms.size()) < atom_count) {
    DiscreteMeasure cand = random_categorical(cells, rng);
    if (tv_distance(cand, setup.nu) >= tau) {
      setup.base_prior.atoms.push_back(std::move(cand));
      setup.base_prior.weights.push_back(1.0 / atom_count);
    }
    if (++guard > 10000)
      throw std::runtime_error("flip setup: could not place atoms tau away from nu");
  }
  return setup;
}

FlipResult mixture_flip_demo(double epsilon, const FlipSetup& setup, int n, std::uint64_t seed) {
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw std::invalid_argument("mixture_flip_demo: epsilon must lie in [0,1)");
  if (n < 0) throw std::invalid_argument("mixture_flip_demo: n must be >= 0");
  for (const DiscreteMeasure& atom : setup.base_prior.atoms)
    if (tv_distance(atom, setup.nu) < setup.tau)
      throw std::invalid_argument("mixture_flip_demo: base prior not tau-separated from nu");

  // pi' = (1-eps) pi + eps delta_nu over the finite atom list.
  std::vector<const DiscreteMeasure*> atoms;
  std::vector<double> base_w;
  std::vector<double> mixed_w;
  for (std::size_t j = 0; j < setup.base_prior.atoms.size(); ++j) {
    atoms.push_back(&setup.base_prior.atoms[j]);
    base_w.push_back(setup.base_prior.weights[j]);
    mixed_w.push_back((1.0 - epsilon) * setup.base_prior.weights[j]);
  }
  atoms.push_back(&setup.nu);
  base_w.push_back(0.0);
  mixed_w.push_back(epsilon);

  FlipResult out;
  {
    long double l1 = 0.0L;
    for (std::size_t j = 0; j < atoms.size(); ++j)
      l1 += std::fabs(base_w[j] - mixed_w[j]);
    out.tv_base_mixed = static_cast<double>(l1 / 2.0L);
  }

  // n i.i.d. draws from nu, then exact categorical conditioning in log space.
  std::vector<int> counts(setup.nu.size(), 0);
  Rng rng(derive_seed(seed, "flip_draws"));
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    double acc = 0.0;
    std::size_t cell = setup.nu.size() - 1;
    for (std::size_t c = 0; c < setup.nu.size(); ++c) {
      acc += setup.nu.weights()[c];
      if (u < acc) {
        cell = c;
        break;
      }
    }
    ++counts[cell];
  }

  auto posterior_mass_near_nu = [&](const std::vector<double>& prior_w) {
    std::vector<double> loglik(atoms.size(), 0.0);
    double max_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      double ll = 0.0;
      for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) continue;
        double p = atoms[j]->weights()[c];
        if (p <= 0.0) {
          ll = -std::numeric_limits<double>::infinity();
          break;
        }
        ll += counts[c] * std::log(p);
      }
      loglik[j] = ll;
      if (prior_w[j] > 0.0 && ll > max_ll) max_ll = ll;
    }
    long double den = 0.0L;
    long double num = 0.0L;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (prior_w[j] <= 0.0 || !std::isfinite(loglik[j])) continue;
      long double w = static_cast<long double>(prior_w[j]) *
                      std::exp(static_cast<long double>(loglik[j] - max_ll));
      den += w;
      if (tv_distance(*atoms[j], setup.nu) < setup.tau / 2.0) num += w;
    }
    return den > 0.0L ? static_cast<double>(num / den) : 0.0;
  };

  out.posterior_mass_near_truth_base = posterior_mass_near_nu(base_w);
  out.posterior_mass_near_truth_mixed = posterior_mass_near_nu(mixed_w);
  return out;
}

}  // namespace brittle_bayes
