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
#include "qng/threshold_engine.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>

#include <boost/math/tools/toms748_solve.hpp>

#include "qng/detector_model.h"
#include "qng/errors.h"
#include "qng/gaussian_core.h"

namespace qng {

namespace {

constexpr int kJetMaxTerms = 600;

const TransferRows& cached_rows(int n, int channels) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<TransferRows>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, channels}];
  if (!slot) slot = std::make_unique<TransferRows>(transfer_rows(n, channels, kJetMaxTerms));
  return *slot;
}

// Photon-statistics route. Returns false when the tail bound does not converge
// within kJetMaxTerms terms.
bool jet_from_photon_statistics(int n, const TransferRows& rows, double beta, double v, GaussianClickJet& out) {
  if (v >= 1.0) return false;
  const double one_minus_v2 = (1.0 - v) * (1.0 + v);
  const double rho = (1.0 - v) / (1.0 + v);
  const double log_rho = std::log(rho);
  const double sqrt_rho = std::sqrt(rho);
  const double a = std::sqrt(v / (2.0 * one_minus_v2));
  const double a_prime = a * 0.5 * (1.0 / v + 2.0 * v / one_minus_v2);
  const double y = a * beta;
  const double dlog_a_beta = -beta * v / (1.0 + v);
  const double dlog_a_var = 0.5 / v - 1.0 / (1.0 + v) - beta * beta / (2.0 * (1.0 + v) * (1.0 + v));
  const double log_tail_base = gaussian_log_tail_bound(beta, v, -1);
  const double tail_target = std::log(1e-17);

  double prev = 0.0;
  double cur = std::sqrt(2.0 * std::sqrt(v) / (1.0 + v)) * std::exp(-beta * beta * v / (4.0 * (1.0 + v)));
  CompensatedSum<> rn, rn1, dnb, dnv, dn1b, dn1v;
  for (int m = 0; m < kJetMaxTerms; ++m) {
    if (m > 0) {
      double next = sqrt_rho * std::sqrt(2.0 / m) * y * cur - rho * std::sqrt((m - 1.0) / m) * prev;
      prev = cur;
      cur = next;
    }
    const double p = cur * cur;
    const double cross = m > 0 ? 2.0 * std::sqrt(2.0 * m * rho) * cur * prev : 0.0;
    const double dp_beta = p * dlog_a_beta + a * cross;
    const double dp_var = p * (dlog_a_var - 2.0 * m / one_minus_v2) + a_prime * beta * cross;
    if (m >= n) {
      const double w = rows.success[m];
      rn.add(w * p);
      dnb.add(w * dp_beta);
      dnv.add(w * dp_var);
    }
    if (m >= n + 1) {
      const double w = rows.error[m];
      rn1.add(w * p);
      dn1b.add(w * dp_beta);
      dn1v.add(w * dp_var);
      double partial = rn1.value();
      // Remaining mass after term m, relative to the smaller of the two sums.
      if (partial > 0.0 && log_tail_base + m * log_rho < tail_target + std::log(partial)) {
        out = {rn.value(), partial, dnb.value(), dnv.value(), dn1b.value(), dn1v.value()};
        return true;
      }
    }
  }
  return false;
}

// Vacuum-probability route with analytic derivatives of the closed form.
GaussianClickJet jet_from_vacuum_probabilities(int n, int channels, double beta_d, double v_d) {
  using T = long double;
  const T beta = beta_d;
  const T v = v_d;
  std::vector<T> p0(n + 2), db(n + 2), dv(n + 2);
  for (int k = 0; k <= n + 1; ++k) {
    const T tau = static_cast<T>(k) / channels;
    const T mu1 = 2 * v + tau * (1 - v);
    const T mu2 = 2 / v + tau * (1 - 1 / v);
    const T p = 2 * std::exp(-beta * beta * tau / (2 * mu2)) / std::sqrt(mu1 * mu2);
    const T mu1p = 2 - tau;
    const T mu2p = -(2 - tau) / (v * v);
    p0[k] = p;
    db[k] = p * (-beta * tau / mu2);
    dv[k] = p * (beta * beta * tau * mu2p / (2 * mu2 * mu2) - mu1p / (2 * mu1) - mu2p / (2 * mu2));
  }
  auto alternating = [&](int order, const std::vector<T>& f, T constant) {
    CompensatedSum<T> s;
    s.add(constant);
    for (int k = 1; k <= order; ++k) {
      T term = static_cast<T>(binomial(order, k)) * f[k];
      s.add(k % 2 ? -term : term);
    }
    return static_cast<double>(s.value());
  };
  return {alternating(n, p0, 1), alternating(n + 1, p0, 1), alternating(n, db, 0),
          alternating(n, dv, 0), alternating(n + 1, db, 0), alternating(n + 1, dv, 0)};
}

double logit(double t) { return std::log(t / (1.0 - t)); }
double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct StatePoint {
  double beta;
  double variance;
};

// Hermite-scaled coordinates: u stays near a root of H_{n+1} along the
// boundary as t = 1 - V -> 0.
StatePoint from_scaled(double t, double u) {
  double v = 1.0 - t;
  return {2.0 * u * std::sqrt(t / v), v};
}

}  // namespace

GaussianClickJet pure_gaussian_click_jet(int n, int channels, double beta, double variance) {
  if (n < 1 || channels < n + 1) throw DomainError("jet needs n >= 1 and channels >= n + 1");
  GaussianModeParams{beta, variance, 0.0}.validate();
  GaussianClickJet jet;
  if (jet_from_photon_statistics(n, cached_rows(n, channels), beta, variance, jet)) return jet;
  return jet_from_vacuum_probabilities(n, channels, beta, variance);
}

double extremal_residual(const GaussianClickJet& j, double beta, double variance) {
  // Derivative along t = 1 - V at fixed Hermite-scaled displacement u, up to a
  // positive factor. Pairing it with d/dbeta (parallel to d/du) keeps both
  // products of the condition away from zero near the boundary.
  const double t = 1.0 - variance;
  const double dbeta_dt = t > 0.0 ? beta / (2.0 * t * variance) : 0.0;
  const double dn_dt = dbeta_dt * j.dn_dbeta - j.dn_dvar;
  const double dn1_dt = dbeta_dt * j.dn1_dbeta - j.dn1_dvar;
  double lhs = j.dn_dbeta * dn1_dt;
  double rhs = dn_dt * j.dn1_dbeta;
  double norm = std::abs(lhs) + std::abs(rhs);
  if (norm == 0.0) return 0.0;
  return (lhs - rhs) / norm;
}

ThresholdSolver::ThresholdSolver(int order, SolverOptions options)
    : order_(order), channels_(order + 1), options_(options) {
  if (order < 1) throw DomainError("criterion order must be >= 1");
  if (options_.slices < 4 || options_.scan_points < 8) throw DomainError("solver resolution too coarse");
  HermiteAnchor anchor = hermite_anchor(order);
  double largest_root = std::sqrt(4.0 * (order + 1) + 2.0);
  u_max_ = std::max(anchor.x_star, 0.5 * largest_root) + 3.0;

  const double z_lo = logit(options_.t_min);
  const double z_hi = logit(1.0 - options_.variance_floor);
  slices_.resize(options_.slices);
  for (int i = 0; i < options_.slices; ++i) {
    double z = z_lo + (z_hi - z_lo) * i / (options_.slices - 1);
    slices_[i].z = z;
  }
  const int workers = std::min(worker_count(), options_.slices);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (int i = next++; i < options_.slices; i = next++) {
      try {
        slices_[i].roots = slice_roots(logistic(slices_[i].z));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  locus_min_ = INFINITY;
  locus_max_ = 0.0;
  for (const auto& s : slices_) {
    for (const auto& r : s.roots) {
      locus_min_ = std::min(locus_min_, r.r_n1);
      locus_max_ = std::max(locus_max_, r.r_n1);
    }
  }
  if (!(locus_max_ > 0.0)) throw SolverError("extremal locus is empty for order " + std::to_string(order));
}

std::vector<ThresholdSolver::Root> ThresholdSolver::slice_roots(double t) const {
  auto residual = [&](double u) {
    StatePoint s = from_scaled(t, u);
    return extremal_residual(pure_gaussian_click_jet(order_, channels_, s.beta, s.variance), s.beta, s.variance);
  };
  std::vector<Root> roots;
  const int n = options_.scan_points;
  double prev_u = u_max_ * 0.5 / n;
  double prev_g = residual(prev_u);
  for (int j = 1; j < n; ++j) {
    double u = u_max_ * (j + 0.5) / n;
    double g = residual(u);
    if (prev_g == 0.0 || (prev_g < 0.0) != (g < 0.0)) {
      boost::uintmax_t iters = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(50);
      auto [lo, hi] = boost::math::tools::toms748_solve(residual, prev_u, u, prev_g, g, tol, iters);
      double root = 0.5 * (lo + hi);
      StatePoint s = from_scaled(t, root);
      GaussianClickJet jet = pure_gaussian_click_jet(order_, channels_, s.beta, s.variance);
      if (jet.r_n1 > 0.0 && jet.r_n > 0.0) roots.push_back({root, jet.r_n, jet.r_n1});
    }
    prev_u = u;
    prev_g = g;
  }
  return roots;
}

std::optional<ThresholdSolver::Root> ThresholdSolver::track_root(double t, double u_guess, double width) const {
  auto residual = [&](double u) {
    StatePoint s = from_scaled(t, u);
    return extremal_residual(pure_gaussian_click_jet(order_, channels_, s.beta, s.variance), s.beta, s.variance);
  };
  double w = std::max(width, 1e-6);
  for (int attempt = 0; attempt < 12; ++attempt, w *= 2.0) {
    double lo = std::max(u_guess - w, 1e-9);
    double hi = std::min(u_guess + w, 1.5 * u_max_);
    double g_lo = residual(lo);
    double g_hi = residual(hi);
    if (g_lo == 0.0 || g_hi == 0.0 || (g_lo < 0.0) != (g_hi < 0.0)) {
      // Several roots may sit in a wide bracket; walk it to take the one
      // nearest the guess.
      const int pieces = 8;
      double best_u = NAN;
      double prev_u = lo;
      double prev_g = g_lo;
      for (int k = 1; k <= pieces; ++k) {
        double u = lo + (hi - lo) * k / pieces;
        double g = k == pieces ? g_hi : residual(u);
        if (prev_g == 0.0 || (prev_g < 0.0) != (g < 0.0)) {
          boost::uintmax_t iters = 200;
          auto tol = boost::math::tools::eps_tolerance<double>(52);
          auto [a, b] = boost::math::tools::toms748_solve(residual, prev_u, u, prev_g, g, tol, iters);
          double r = 0.5 * (a + b);
          if (std::isnan(best_u) || std::abs(r - u_guess) < std::abs(best_u - u_guess)) best_u = r;
        }
        prev_u = u;
        prev_g = g;
      }
      if (std::isnan(best_u)) continue;
      StatePoint s = from_scaled(t, best_u);
      GaussianClickJet jet = pure_gaussian_click_jet(order_, channels_, s.beta, s.variance);
      return Root{best_u, jet.r_n, jet.r_n1};
    }
  }
  return std::nullopt;
}

std::optional<ThresholdSample> ThresholdSolver::refine_crossing(double log_c, const Slice& a, const Root& ra,
                                                                const Slice& b, const Root& rb) const {
  const double du = std::abs(rb.u - ra.u);
  std::optional<Root> last;
  double last_t = 0.0;
  auto f = [&](double z) {
    double frac = (z - a.z) / (b.z - a.z);
    double guess = ra.u + frac * (rb.u - ra.u);
    double t = logistic(z);
    auto r = track_root(t, guess, 0.5 * du + 1e-4);
    if (!r) throw SolverError("lost extremal branch while refining");
    last = r;
    last_t = t;
    return std::log(r->r_n1) - log_c;
  };
  double fa = std::log(ra.r_n1) - log_c;
  double fb = std::log(rb.r_n1) - log_c;
  try {
    double z;
    if (fa == 0.0) {
      z = a.z;
    } else if (fb == 0.0) {
      z = b.z;
    } else {
      boost::uintmax_t iters = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(50);
      auto [lo, hi] = boost::math::tools::toms748_solve(f, a.z, b.z, fa, fb, tol, iters);
      z = 0.5 * (lo + hi);
    }
    f(z);
  } catch (const SolverError&) {
    return std::nullopt;
  }
  StatePoint s = from_scaled(last_t, last->u);
  GaussianClickJet jet = pure_gaussian_click_jet(order_, channels_, s.beta, s.variance);
  return ThresholdSample{std::exp(log_c), jet.r_n, s.beta, s.variance, extremal_residual(jet, s.beta, s.variance)};
}

std::optional<ThresholdSample> ThresholdSolver::solve(double r_n1) const {
  if (!(r_n1 > 0.0)) throw DomainError("boundary solve needs r_n1 > 0");
  const double log_c = std::log(r_n1);
  std::optional<ThresholdSample> best;
  for (size_t i = 0; i + 1 < slices_.size(); ++i) {
    const Slice& a = slices_[i];
    const Slice& b = slices_[i + 1];
    for (const Root& ra : a.roots) {
      // Continue the branch to the root of the next slice closest in u.
      const Root* match = nullptr;
      for (const Root& rb : b.roots) {
        if (!match || std::abs(rb.u - ra.u) < std::abs(match->u - ra.u)) match = &rb;
      }
      if (!match || std::abs(match->u - ra.u) > 0.25) continue;
      double fa = std::log(ra.r_n1) - log_c;
      double fb = std::log(match->r_n1) - log_c;
      if ((fa < 0.0) == (fb < 0.0) && fa != 0.0 && fb != 0.0) continue;
      auto sample = refine_crossing(log_c, a, ra, b, *match);
      if (sample && (!best || sample->r_n_max > best->r_n_max)) best = sample;
    }
  }
  return best;
}

ThresholdCurve::ThresholdCurve(int order, std::vector<ThresholdSample> samples)
    : order_(order), samples_(std::move(samples)) {
  if (order < 1) throw DomainError("criterion order must be >= 1");
  if (samples_.size() < 2) throw DomainError("threshold curve needs at least two samples");
  std::vector<double> x, y;
  for (size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!(s.r_n1 > 0.0 && s.r_n1 < 1.0 && s.r_n_max > 0.0 && s.r_n_max < 1.0)) {
      throw DomainError("threshold samples must lie in (0, 1)");
    }
    if (i > 0 && !(s.r_n1 > samples_[i - 1].r_n1 && s.r_n_max > samples_[i - 1].r_n_max)) {
      throw SolverError("threshold curve is not strictly increasing at sample " + std::to_string(i));
    }
    x.push_back(std::log(s.r_n1));
    y.push_back(std::log(s.r_n_max));
  }
  log_curve_ = MonotoneCubic(std::move(x), std::move(y));
}

double ThresholdCurve::interpolate(double r_n1) const {
  if (!(r_n1 >= r_n1_min() * (1 - 1e-12) && r_n1 <= r_n1_max() * (1 + 1e-12))) {
    throw RangeError("r_n1 outside sampled threshold range");
  }
  return std::exp(log_curve_(std::log(r_n1)));
}

ThresholdValue ThresholdCurve::evaluate(double r_n1) const {
  if (!(r_n1 >= 0.0)) throw DomainError("r_n1 must be >= 0");
  if (r_n1 > r_n1_max() * (1 + 1e-12)) {
    std::ostringstream os;
    os << "r_n1 = " << r_n1 << " lies above the threshold curve range (max " << r_n1_max() << ")";
    throw RangeError(os.str());
  }
  if (r_n1 < r_n1_min() * (1 - 1e-12)) return {asymptote(r_n1), ThresholdRegime::asymptotic};
  return {interpolate(std::clamp(r_n1, r_n1_min(), r_n1_max())), ThresholdRegime::interpolated};
}

std::optional<double> ThresholdCurve::preimage(double r_n) const {
  if (!(r_n >= 0.0)) throw DomainError("r_n must be >= 0");
  if (r_n > samples_.back().r_n_max) return std::nullopt;
  if (r_n >= samples_.front().r_n_max) return std::exp(log_curve_.inverse(std::log(r_n)));
  const auto& s0 = samples_.front();
  const double anchored = s0.r_n1 * std::pow(r_n / s0.r_n_max, (order_ + 2.0) / order_);
  const double closed = threshold_closed_form_inverse(order_, r_n / kAsymptoticSafety);
  return std::min({anchored, closed, r_n1_min()});
}

double ThresholdCurve::asymptote(double r_n1) const {
  // For large n the closed form undershoots the exact boundary by more than the
  // safety factor at the bottom of the default grid, so the lowest sample is
  // also continued with the limiting exponent; the larger value is kept.
  const auto& s0 = samples_.front();
  const double anchored = s0.r_n_max * std::pow(r_n1 / s0.r_n1, order_ / (order_ + 2.0));
  return std::max(kAsymptoticSafety * threshold_closed_form(order_, r_n1), anchored);
}

double ThresholdCurve::log_slope(double r_n1) const {
  return 1.0 / log_curve_.derivative(std::log(std::clamp(r_n1, r_n1_min(), r_n1_max())));
}

double ThresholdCurve::functional_max(double a) const {
  double best = -INFINITY;
  for (const auto& s : samples_) best = std::max(best, s.r_n_max + a * s.r_n1);
  return best;
}

std::vector<double> ThresholdGrid::values() const {
  if (!(r_n1_min > 0.0 && r_n1_max > r_n1_min && r_n1_max < 1.0) || points < 2) {
    throw DomainError("threshold grid needs 0 < min < max < 1 and at least two points");
  }
  std::vector<double> out(points);
  const double lo = std::log10(r_n1_min);
  const double hi = std::log10(r_n1_max);
  for (int i = 0; i < points; ++i) out[i] = std::pow(10.0, lo + (hi - lo) * i / (points - 1));
  out.front() = r_n1_min;
  out.back() = r_n1_max;
  return out;
}

ThresholdCurve threshold_exact(int n, std::span<const double> r_n1_grid, const SolverOptions& options) {
  for (double c : r_n1_grid) {
    if (!(c > 0.0 && c < 0.5)) throw DomainError("threshold grid values must lie in (0, 0.5)");
  }
  ThresholdSolver solver(n, options);
  std::vector<std::optional<ThresholdSample>> points(r_n1_grid.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < r_n1_grid.size(); i = next++) points[i] = solver.solve(r_n1_grid[i]);
  };
  std::vector<std::thread> pool;
  const int workers = std::min<int>(worker_count(), static_cast<int>(r_n1_grid.size()));
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  std::vector<ThresholdSample> samples;
  for (size_t i = 0; i < points.size(); ++i) {
    if (!points[i]) {
      std::ostringstream os;
      os << "no boundary point for order " << n << " at r_n1 = " << r_n1_grid[i] << " (traced locus spans ["
         << solver.locus_min() << ", " << solver.locus_max() << "])";
      throw SolverError(os.str());
    }
    samples.push_back(*points[i]);
  }
  return ThresholdCurve(n, std::move(samples));
}

ThresholdCurve threshold_locus_curve(const ThresholdSolver& solver, int points, double r_n1_floor) {
  if (points < 2) throw DomainError("locus curve needs at least two points");
  // Logit spacing: logarithmic at small rates, dense where R_{n+1} -> 1.
  auto logit = [](double r) { return std::log(r) - std::log1p(-r); };
  const double lo = logit(std::max(solver.locus_min(), r_n1_floor) * (1 + 1e-6));
  const double hi = logit(solver.locus_max() * (1 - 1e-6));
  if (!(hi > lo)) throw SolverError("traced locus is empty");
  std::vector<std::optional<ThresholdSample>> found(points);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < points; i = next++) {
      const double y = lo + (hi - lo) * i / (points - 1);
      found[i] = solver.solve(1.0 / (1.0 + std::exp(-y)));
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < std::min(worker_count(), points); ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  std::vector<ThresholdSample> samples;
  for (auto& f : found) {
    if (f && (samples.empty() || (f->r_n1 > samples.back().r_n1 && f->r_n_max > samples.back().r_n_max))) {
      samples.push_back(*f);
    }
  }
  return ThresholdCurve(solver.order(), std::move(samples));
}

ThresholdCurve threshold_exact(int n, const ThresholdGrid& grid, const SolverOptions& options) {
  std::vector<double> values = grid.values();
  return threshold_exact(n, values, options);
}

std::pair<double, double> threshold_param_approx(int n, double t) {
  if (n < 1) throw DomainError("criterion order must be >= 1");
  if (!(t > 0.0)) throw DomainError("parameter t must be > 0");
  const HermiteAnchor anchor = hermite_anchor(n);
  const double h2 = anchor.h_n_sq;
  const double x2 = anchor.x_star * anchor.x_star;
  const double nn = n;
  const double scale = std::pow(4.0 * (nn + 1.0), nn);
  const double r_n = 0.5 * h2 / scale * std::pow(t, nn) * (2.0 + nn * t);
  const double bracket = 12.0 * (1.0 + nn) + 6.0 * (1.0 + nn) * (2.0 + nn) * t - x2 * (2.0 + 3.0 * nn) * t;
  const double r_n1 = bracket * h2 / (3.0 * 32.0 * scale) * std::pow(t, nn + 2.0);
  return {r_n, r_n1};
}

double threshold_closed_form(int n, double r_n1) {
  if (n < 1) throw DomainError("criterion order must be >= 1");
  if (!(r_n1 >= 0.0)) throw DomainError("r_n1 must be >= 0");
  if (r_n1 == 0.0) return 0.0;
  const double h2 = hermite_anchor(n).h_n_sq;
  const double nn = n;
  const double log_base = std::log(r_n1) - std::log(2.0 * std::pow(nn + 1.0, 3));
  return std::exp((2.0 * std::log(h2) + nn * log_base) / (nn + 2.0));
}

double threshold_closed_form_inverse(int n, double r_n) {
  if (n < 1) throw DomainError("criterion order must be >= 1");
  if (!(r_n >= 0.0)) throw DomainError("r_n must be >= 0");
  if (r_n == 0.0) return 0.0;
  const double h2 = hermite_anchor(n).h_n_sq;
  const double nn = n;
  return 2.0 * std::pow(nn + 1.0, 3) * std::exp(((nn + 2.0) * std::log(r_n) - 2.0 * std::log(h2)) / nn);
}

FunctionalCheck functional_check(double r_n, double r_n1, const ThresholdCurve& curve) {
  if (!(r_n >= 0.0 && r_n <= 1.0 && r_n1 >= 0.0 && r_n1 <= 1.0)) throw DomainError("click probabilities must lie in [0, 1]");
  ThresholdValue v = curve.evaluate(r_n1);
  return {r_n > v.r_n ? QngVerdict::qng : QngVerdict::not_qng, v.regime, v.r_n};
}

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  int n = hw > 0 ? hw : 1;
  if (const char* env = std::getenv("QNG_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(n, 1);
}

}  // namespace qng
