#include "brittle_bayes/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "brittle_bayes/rng.hpp"

namespace brittle_bayes {

namespace {

// A candidate is a two-atom mixture. Each atom puts a designated mass at every
// ball center and the rest at one bulk point; the mixture weight comes from
// the mean constraint. This is independent of the bounds engine: no shared
// search code, only the measure primitives.
struct Candidate {
  double bulk_hi = 1.0;   // bulk location of atom 1
  double bulk_lo = 0.0;   // bulk location of atom 2
  double level_hi = 0.5;  // ball-mass level of atom 1 in [0,1] band coordinates
  double level_lo = 0.5;  // ball-mass level of atom 2
};

struct OracleProblem {
  const PriorClass* cls = nullptr;
  const QuantityOfInterest* phi = nullptr;
  const Observation* evidence = nullptr;
  std::vector<Ball> balls;  // constraint balls (band kinds) or evidence balls
};

// Maps a band coordinate u in [0,1] to per-ball masses.
std::vector<double> ball_masses_at_level(const OracleProblem& pb, double u) {
  const std::size_t n = pb.balls.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  switch (pb.cls->kind()) {
    case PriorClass::Kind::likelihood_band: {
      double l0 = 1.0;
      for (const Ball& b : pb.balls) l0 *= b.hi() - b.lo();
      const double target = (l0 / pb.cls->alpha()) *
                            std::pow(pb.cls->alpha() * pb.cls->alpha(), u);
      const double each = std::pow(target, 1.0 / static_cast<double>(n));
      for (double& v : out) v = each;
      return out;
    }
    case PriorClass::Kind::per_point_band: {
      const double g = pb.cls->gamma();
      for (std::size_t i = 0; i < n; ++i) {
        const double mu0 = pb.balls[i].hi() - pb.balls[i].lo();
        out[i] = (mu0 / g) * std::pow(g * g, u);
      }
      return out;
    }
    default: {
      // unconstrained: level sweeps mass from 1e-6 to 1e-1 per ball
      const double each = std::pow(10.0, -6.0 + 5.0 * u);
      for (double& v : out) v = each;
      return out;
    }
  }
}

double snap_off_balls(const OracleProblem& pb, double x) {
  for (const Ball& b : pb.balls) {
    if (!b.contains(x)) continue;
    const double left = b.center - b.radius;
    const double right = b.center + b.radius;
    if (left >= 0.0 && (right > 1.0 || x - left <= right - x)) return left;
    if (right <= 1.0) return right;
    return -1.0;
  }
  return x;
}

struct Evaluation {
  bool feasible = false;
  bool zero_evidence = false;
  double value = 0.0;
  WeightedAtoms mixture;
};

Evaluation evaluate(const OracleProblem& pb, const Candidate& c) {
  Evaluation out;
  const double b_hi = snap_off_balls(pb, c.bulk_hi);
  const double b_lo = snap_off_balls(pb, c.bulk_lo);
  if (b_hi < 0.0 || b_lo < 0.0) return out;

  auto make_atom = [&](double bulk, double level) {
    std::vector<double> masses = ball_masses_at_level(pb, level);
    std::vector<double> xs;
    std::vector<double> ws;
    double total = 0.0;
    for (std::size_t i = 0; i < pb.balls.size(); ++i) {
      xs.push_back(pb.balls[i].center);
      ws.push_back(masses[i]);
      total += masses[i];
    }
    if (total >= 0.9) return std::optional<DiscreteMeasure>{};
    xs.push_back(bulk);
    ws.push_back(1.0 - total);
    return std::optional<DiscreteMeasure>{DiscreteMeasure::normalized(std::move(xs), std::move(ws))};
  };

  auto a1 = make_atom(b_hi, c.level_hi);
  auto a2 = make_atom(b_lo, c.level_lo);
  if (!a1 || !a2) return out;
  const double e1 = a1->mean();
  const double e2 = a2->mean();
  const double m = pb.cls->m();
  double w;
  if (std::fabs(e1 - e2) < 1e-12) {
    if (std::fabs(e1 - m) > 1e-9) return out;
    w = 0.5;
  } else {
    w = (m - e2) / (e1 - e2);
    if (w < 0.0 || w > 1.0) return out;
  }
  out.mixture.weights = {w, 1.0 - w};
  out.mixture.atoms = {std::move(*a1), std::move(*a2)};
  if (pb.evidence == nullptr) {
    out.value = out.mixture.prior_value(*pb.phi);
    out.feasible = true;
    return out;
  }
  try {
    out.value = out.mixture.posterior_value(*pb.phi, *pb.evidence);
  } catch (const ZeroEvidence&) {
    out.zero_evidence = true;
    return out;
  }
  out.feasible = true;
  return out;
}

// Deterministic candidate stream: two enumeration passes (coarse, then fine)
// followed by random exploration mixed with jitter around the incumbent. The
// stream depends only on the seed and the consumed prefix, so nested budgets
// replay identical prefixes and the best value is monotone in the budget.
class CandidateStream {
 public:
  CandidateStream(const OracleProblem& pb, std::uint64_t seed)
      : pb_(pb), rng_(derive_seed(seed, "oracle_stream")) {
    const bool banded = pb.cls->kind() == PriorClass::Kind::likelihood_band ||
                        pb.cls->kind() == PriorClass::Kind::per_point_band;
    const bool needs_levels = banded || pb.evidence != nullptr;
    levels_ = needs_levels ? std::vector<double>{0.0, 0.5, 1.0} : std::vector<double>{0.5};
    if (pb.balls.empty()) levels_ = {0.5};
  }

  Candidate next(const Evaluation* incumbent, std::int64_t index) {
    if (enum_phase_ < 2) {
      const int g = enum_phase_ == 0 ? 11 : 101;
      Candidate c = enumerated(g, enum_index_);
      if (++enum_index_ >= enum_total(g)) {
        ++enum_phase_;
        enum_index_ = 0;
      }
      return c;
    }
    // Random phase: alternate fresh draws with jitter around the incumbent.
    Candidate c;
    if (incumbent != nullptr && index % 2 == 1) {
      const double scale = 0.02;
      c.bulk_hi = std::clamp(incumbent_bulk_hi_ + scale * (rng_.uniform() - 0.5), 0.0, 1.0);
      c.bulk_lo = std::clamp(incumbent_bulk_lo_ + scale * (rng_.uniform() - 0.5), 0.0, 1.0);
      c.level_hi = std::clamp(incumbent_level_hi_ + scale * (rng_.uniform() - 0.5), 0.0, 1.0);
      c.level_lo = std::clamp(incumbent_level_lo_ + scale * (rng_.uniform() - 0.5), 0.0, 1.0);
    } else {
      c.bulk_hi = rng_.uniform();
      c.bulk_lo = rng_.uniform();
      c.level_hi = rng_.uniform();
      c.level_lo = rng_.uniform();
    }
    return c;
  }

  void remember(const Candidate& c) {
    incumbent_bulk_hi_ = c.bulk_hi;
    incumbent_bulk_lo_ = c.bulk_lo;
    incumbent_level_hi_ = c.level_hi;
    incumbent_level_lo_ = c.level_lo;
  }

 private:
  std::int64_t enum_total(int g) const {
    return static_cast<std::int64_t>(g) * g * static_cast<std::int64_t>(levels_.size()) *
           static_cast<std::int64_t>(levels_.size());
  }

  Candidate enumerated(int g, std::int64_t idx) const {
    const auto nl = static_cast<std::int64_t>(levels_.size());
    Candidate c;
    c.level_lo = levels_[static_cast<std::size_t>(idx % nl)];
    idx /= nl;
    c.level_hi = levels_[static_cast<std::size_t>(idx % nl)];
    idx /= nl;
    c.bulk_lo = static_cast<double>(idx % g) / (g - 1);
    idx /= g;
    c.bulk_hi = static_cast<double>(idx % g) / (g - 1);
    return c;
  }

  const OracleProblem& pb_;
  Rng rng_;
  std::vector<double> levels_;
  int enum_phase_ = 0;
  std::int64_t enum_index_ = 0;
  double incumbent_bulk_hi_ = 0.5;
  double incumbent_bulk_lo_ = 0.5;
  double incumbent_level_hi_ = 0.5;
  double incumbent_level_lo_ = 0.5;
};

OracleResult run_oracle(const OracleProblem& pb, std::int64_t budget, std::uint64_t seed) {
  if (budget < 1000) throw std::invalid_argument("oracle: budget must be >= 1000");
  if (pb.cls->kind() == PriorClass::Kind::moment_class)
    throw UnsupportedCombination(
        "oracle: finite mixtures cannot satisfy the moment-distribution constraint");
  if (pb.cls->kind() == PriorClass::Kind::mixture)
    throw UnsupportedCombination("oracle: mixture classes are exercised by the flip demo");

  CandidateStream stream(pb, seed);
  OracleResult res;
  Evaluation best;
  std::int64_t zero_evidence_count = 0;
  for (std::int64_t i = 0; i < budget; ++i) {
    Candidate c = stream.next(best.feasible ? &best : nullptr, i);
    Evaluation ev = evaluate(pb, c);
    ++res.candidates_evaluated;
    if (ev.zero_evidence) ++zero_evidence_count;
    if (!ev.feasible) continue;
    ++res.candidates_feasible;
    if (!best.feasible || ev.value > best.value) {
      best = ev;
      stream.remember(c);
    }
  }
  if (!best.feasible) {
    if (pb.evidence != nullptr && zero_evidence_count > 0)
      throw AllCandidatesZeroEvidence("oracle: every feasible candidate had zero evidence");
    throw NoFeasibleCandidate("oracle: no candidate satisfied the class constraints");
  }
  res.best_value = best.value;
  res.witness = best.mixture;
  return res;
}

}  // namespace

OracleResult oracle_prior_bound(const PriorClass& cls, const QuantityOfInterest& phi,
                                std::int64_t budget, std::uint64_t seed) {
  OracleProblem pb;
  pb.cls = &cls;
  pb.phi = &phi;
  if (cls.constraint_balls().has_value()) pb.balls = cls.constraint_balls()->balls;
  return run_oracle(pb, budget, seed);
}

OracleResult oracle_posterior_bound(const PriorClass& cls, const QuantityOfInterest& phi,
                                    const Observation& obs, std::int64_t budget,
                                    std::uint64_t seed) {
  OracleProblem pb;
  pb.cls = &cls;
  pb.phi = &phi;
  pb.evidence = &obs;
  if (cls.constraint_balls().has_value())
    pb.balls = cls.constraint_balls()->balls;
  else
    pb.balls = obs.balls;
  return run_oracle(pb, budget, seed);
}

}  // namespace brittle_bayes
