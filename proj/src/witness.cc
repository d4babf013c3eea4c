// Copyright 2026 The QNG Witness Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qng/witness.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/tools/roots.hpp>

#include "qng/errors.h"

namespace qng {
namespace {

// Up to a constant, for 0 < x < 1.
double log_beta_density(double a, double b, double x) { return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x); }

double threshold_at(const ThresholdCurve& curve, double r_n1, ThresholdRegime* regime = nullptr) {
  const ThresholdValue v = curve.evaluate(r_n1);
  if (regime) *regime = v.regime;
  return v.r_n;
}

bool above_curve(const ThresholdCurve& curve, double r_n, double r_n1) {
  return r_n > threshold_at(curve, r_n1);
}

// Largest x in [0, cap] with pred(x) true, given pred(0) true and pred
// monotone, to within `resolution`.
template <typename Pred>
double last_true(Pred pred, double resolution, double cap) {
  double lo = 0.0;
  double hi = 1.0;
  while (pred(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > cap) throw SolverError("attenuation search exceeded " + std::to_string(cap) + " dB");
  }
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? lo : hi) = mid;
  }
  return lo;
}

constexpr double kDepthCapDb = 4096.0;

double db_to_eta(double db) { return std::pow(10.0, -db / 10.0); }

}  // namespace

void CountRecord::validate() const {
  if (order < 1) throw InputError("record order must be >= 1");
  if (count_n > trials) throw InputError("count_n exceeds trials");
  if (count_n1 > count_n) throw InputError("count_n1 exceeds count_n");
  if (subsets.empty()) return;
  if (static_cast<int>(subsets.size()) != order + 1) {
    throw InputError("expected " + std::to_string(order + 1) + " subset counts, got " + std::to_string(subsets.size()));
  }
  for (auto c : subsets) {
    if (c < count_n1 || c > trials) throw InputError("subset count outside [count_n1, trials]");
  }
  if (subsets[order] != count_n) throw InputError("designated subset count differs from count_n");
}

IntervalEstimate bayes_interval(double k, double trials) {
  if (!(trials >= 1.0)) throw InputError("bayes_interval needs at least one trial");
  if (!(k >= 0.0 && k <= trials)) throw InputError("count must lie in [0, trials]");
  const double a = k + 1.0;
  const double b = trials - k + 1.0;
  const boost::math::beta_distribution<double> post(a, b);
  IntervalEstimate out;
  out.point = k / trials;
  if (k == 0.0) {
    out.lo = 0.0;
    out.hi = boost::math::quantile(post, kCredibleMass);
    return out;
  }
  if (k == trials) {
    out.lo = boost::math::quantile(post, 1.0 - kCredibleMass);
    out.hi = 1.0;
    return out;
  }
  // Width is stationary where the density is equal at both ends. The lower
  // tail mass p parametrises the intervals carrying the credible mass.
  const double p_max = 1.0 - kCredibleMass;
  auto ends = [&](double p) {
    return std::pair{boost::math::quantile(post, p), boost::math::quantile(post, p + kCredibleMass)};
  };
  auto g = [&](double p) {
    auto [lo, hi] = ends(p);
    return log_beta_density(a, b, lo) - log_beta_density(a, b, hi);
  };
  double p_lo = p_max * 1e-12;
  double p_hi = p_max * (1.0 - 1e-12);
  double g_lo = g(p_lo);
  double g_hi = g(p_hi);
  double p;
  if (g_lo >= 0.0) {
    p = p_lo;
  } else if (g_hi <= 0.0) {
    p = p_hi;
  } else {
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(g, p_lo, p_hi, g_lo, g_hi,
                                               boost::math::tools::eps_tolerance<double>(50), iters);
    p = 0.5 * (r.first + r.second);
  }
  std::tie(out.lo, out.hi) = ends(p);
  out.point = std::clamp(out.point, out.lo, out.hi);
  return out;
}

IntervalEstimate bayes_interval(std::uint64_t k, std::uint64_t trials) {
  return bayes_interval(static_cast<double>(k), static_cast<double>(trials));
}

RateEstimate estimate_rates(const CountRecord& rec, SubsetPolicy policy) {
  rec.validate();
  if (rec.trials == 0) throw InputError("record has zero trials");
  RateEstimate out;
  out.policy = policy;
  out.effective_trials = static_cast<double>(rec.trials);
  if (policy == SubsetPolicy::mean) {
    if (rec.subsets.empty()) throw InputError("subset averaging requested but record has no subset counts");
    const double sum = std::accumulate(rec.subsets.begin(), rec.subsets.end(), 0.0);
    out.r_n = bayes_interval(sum / rec.subsets.size(), out.effective_trials);
  } else {
    out.r_n = bayes_interval(rec.count_n, rec.trials);
  }
  out.r_n1 = bayes_interval(rec.count_n1, rec.trials);
  return out;
}

std::string to_string(VerdictState s) {
  switch (s) {
    case VerdictState::positive: return "positive";
    case VerdictState::inconclusive: return "inconclusive";
    case VerdictState::negative: return "negative";
    case VerdictState::no_data: return "no-data";
  }
  return "?";
}

std::string to_string(const Depth& d) {
  switch (d.kind) {
    case DepthKind::unbounded: return "unbounded";
    case DepthKind::not_qng_at_source: return "not QNG at source";
    case DepthKind::finite: break;
  }
  std::ostringstream os;
  os << d.db;
  return os.str();
}

Depth rate_scaling_depth(double r_n, double r_n1, const ThresholdCurve& curve) {
  const int n = curve.order();
  if (!above_curve(curve, r_n, r_n1)) return {DepthKind::not_qng_at_source, 0.0};
  if (r_n1 == 0.0) return {DepthKind::unbounded, 0.0};
  auto qng = [&](double db) {
    const double eta = db_to_eta(db);
    return above_curve(curve, r_n * std::pow(eta, n), r_n1 * std::pow(eta, n + 1));
  };
  return {DepthKind::finite, last_true(qng, kDepthResolutionDb, kDepthCapDb)};
}

Verdict classify(const CountRecord& rec, const ThresholdCurve& curve, SubsetPolicy policy) {
  if (rec.order != curve.order()) throw DomainError("record order differs from curve order");
  Verdict v;
  v.rates = estimate_rates(rec, policy);
  const bool no_counts = rec.count_n1 == 0 &&
      (policy == SubsetPolicy::mean ? std::all_of(rec.subsets.begin(), rec.subsets.end(), [](auto c) { return c == 0; })
                                    : rec.count_n == 0);
  const auto& rn = v.rates.r_n;
  const auto& rn1 = v.rates.r_n1;
  if (no_counts) {
    v.state = VerdictState::no_data;
    v.d_n = v.d_n1 = NAN;
    return v;
  }

  const bool positive = rn1.hi <= curve.r_n1_max() && above_curve(curve, rn.lo, rn1.hi);
  const bool negative = rn.hi < threshold_at(curve, rn1.lo);
  v.state = positive ? VerdictState::positive : negative ? VerdictState::negative : VerdictState::inconclusive;

  if (rn1.point <= curve.r_n1_max()) {
    v.d_n1 = std::log10(rn.point) - std::log10(threshold_at(curve, rn1.point, &v.regime));
  } else {
    v.d_n1 = NAN;
  }
  const auto pre = curve.preimage(rn.point);
  v.d_n = pre ? std::log10(*pre / rn1.point) : NAN;

  if (v.d_n1 > 0.0) {
    v.depth = rate_scaling_depth(rn.point, rn1.point, curve);
    v.depth_lo = positive ? rate_scaling_depth(rn.lo, rn1.hi, curve) : Depth{DepthKind::not_qng_at_source, 0.0};
    v.depth_hi = rate_scaling_depth(rn.hi, rn1.lo, curve);
  }
  return v;
}

PathPoint path_point(const PhotonDistribution& dist, int n, int channels, double db) {
  PathPoint p;
  p.db = db;
  p.eta = db_to_eta(db);
  p.clicks = click_probabilities(attenuate(dist, p.eta), n, channels);
  return p;
}

std::vector<PathPoint> attenuation_path(const PhotonDistribution& dist, int n, int channels, double step_db,
                                        double max_db) {
  if (!(step_db > 0.0)) throw DomainError("attenuation step must be > 0 dB");
  if (!(max_db >= 0.0)) throw DomainError("maximum attenuation must be >= 0 dB");
  std::vector<PathPoint> path;
  for (int k = 0; k * step_db <= max_db * (1 + 1e-12); ++k) path.push_back(path_point(dist, n, channels, k * step_db));
  return path;
}

Depth qng_depth(const PhotonDistribution& dist, int n, int channels, const ThresholdCurve& curve) {
  if (curve.order() != n) throw DomainError("curve order differs from criterion order");
  const ClickPair source = click_probabilities(dist, n, channels);
  if (!above_curve(curve, source.r_n, source.r_n1)) return {DepthKind::not_qng_at_source, 0.0};
  if (source.r_n1 == 0.0) return {DepthKind::unbounded, 0.0};
  auto qng = [&](double db) {
    const ClickPair c = path_point(dist, n, channels, db).clicks;
    if (c.r_n1 == 0.0) throw PrecisionError("error rate underflowed along the attenuation path");
    return above_curve(curve, c.r_n, c.r_n1);
  };
  return {DepthKind::finite, last_true(qng, kDepthResolutionDb, kDepthCapDb)};
}

double fock_single_criterion_transmittance(int m, const ThresholdSolver& solver) {
  if (m < 2) throw DomainError("Fock transmittance needs m >= 2");
  if (solver.order() != 1) throw DomainError("single-photon criterion needs an order-1 solver");
  const PhotonDistribution fock = PhotonDistribution::fock(m);
  auto qng = [&](double eta) {
    const ClickPair c = click_probabilities(attenuate(fock, eta), 1, 2);
    if (c.r_n1 > solver.locus_max()) return false;
    const auto s = solver.solve(c.r_n1);
    const double thr = s ? s->r_n_max : ThresholdCurve::kAsymptoticSafety * threshold_closed_form(1, c.r_n1);
    return c.r_n > thr;
  };
  if (!qng(1.0)) throw SolverError("unattenuated Fock state fails the single-photon criterion");
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    (qng(mid) ? hi : lo) = mid;
  }
  return hi;
}

double fock_single_criterion_transmittance(int m) {
  static const ThresholdSolver solver(1);
  return fock_single_criterion_transmittance(m, solver);
}

}  // namespace qng
