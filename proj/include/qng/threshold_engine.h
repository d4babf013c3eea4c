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
#ifndef QNG_THRESHOLD_ENGINE_H
#define QNG_THRESHOLD_ENGINE_H

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qng/hermite.h"
#include "qng/monotone_cubic.h"

namespace qng {

/// Click pair of a pure phi = 0 Gaussian state together with its gradient in
/// (beta, variance), on a balanced detector with `channels` outputs.
struct GaussianClickJet {
  double r_n = 0.0;
  double r_n1 = 0.0;
  double dn_dbeta = 0.0;
  double dn_dvar = 0.0;
  double dn1_dbeta = 0.0;
  double dn1_dvar = 0.0;
};

/// Photon-statistics route (cancellation free) when its Cramer tail bound
/// converges, vacuum-probability route in long double otherwise.
GaussianClickJet pure_gaussian_click_jet(int n, int channels, double beta, double variance);

/// Extremal condition d_b R_n d_V R_{n+1} = d_V R_n d_b R_{n+1}, expressed in
/// the coordinates (u, t) with t = 1 - V and u = beta sqrt(V) / (2 sqrt(t)),
/// relative to the sum of the magnitudes of its two products. Lies in [-1, 1];
/// the zero set is the same as in (beta, V).
///
/// In (beta, V) both products vanish together near the boundary at small
/// R_{n+1} (the error rate is flat in beta at the valley floor and the success
/// rate is flat in V), so a relative residual there is pure rounding noise.
double extremal_residual(const GaussianClickJet& jet, double beta, double variance);

/// One boundary point and the pure state that attains it.
struct ThresholdSample {
  double r_n1 = 0.0;
  double r_n_max = 0.0;
  double beta = 0.0;
  double variance = 1.0;
  double residual = 0.0;
};

struct SolverOptions {
  /// Slices of the squeezing parameter t = 1 - V, logit-spaced.
  int slices = 400;
  /// Scan points of the Hermite-scaled displacement u per slice.
  int scan_points = 240;
  double t_min = 1e-6;
  /// Lowest variance explored. Large error rates (Fock states with several
  /// photons on a two-channel detector) need strong squeezing.
  double variance_floor = 2e-3;
};

/// Locus of the extremal condition for one criterion order on an (n+1)-channel
/// detector. Construction traces the locus once; solve() then finds the
/// largest R_n on the locus at any requested R_{n+1}. Immutable and thread
/// safe after construction.
class ThresholdSolver {
 public:
  explicit ThresholdSolver(int order, SolverOptions options = {});

  int order() const { return order_; }
  /// Boundary point at r_n1, or nullopt when r_n1 is outside the traced locus.
  std::optional<ThresholdSample> solve(double r_n1) const;
  double locus_min() const { return locus_min_; }
  double locus_max() const { return locus_max_; }

 private:
  struct Root {
    double u;
    double r_n;
    double r_n1;
  };
  struct Slice {
    double z;
    std::vector<Root> roots;
  };

  std::vector<Root> slice_roots(double t) const;
  std::optional<Root> track_root(double t, double u_guess, double width) const;
  std::optional<ThresholdSample> refine_crossing(double log_c, const Slice& a, const Root& ra, const Slice& b,
                                                 const Root& rb) const;

  int order_;
  int channels_;
  SolverOptions options_;
  double u_max_;
  std::vector<Slice> slices_;
  double locus_min_ = 0.0;
  double locus_max_ = 0.0;
};

/// Regime in which a threshold value was produced.
enum class ThresholdRegime { interpolated, asymptotic };

struct ThresholdValue {
  double r_n = 0.0;
  ThresholdRegime regime = ThresholdRegime::interpolated;
};

/// Sampled threshold boundary with monotone cubic interpolation in log-log
/// coordinates. Below the sampled range the closed-form asymptote times a 1.05
/// safety factor is used and flagged, or the lowest sample continued with the
/// limiting exponent n/(n+2) when that is larger; above the range, queries
/// throw RangeError.
class ThresholdCurve {
 public:
  static constexpr double kAsymptoticSafety = 1.05;

  ThresholdCurve() = default;
  ThresholdCurve(int order, std::vector<ThresholdSample> samples);

  int order() const { return order_; }
  const std::vector<ThresholdSample>& samples() const { return samples_; }
  double r_n1_min() const { return samples_.front().r_n1; }
  double r_n1_max() const { return samples_.back().r_n1; }

  ThresholdValue evaluate(double r_n1) const;
  /// Interpolated boundary without the asymptotic fallback; r_n1 must be in range.
  double interpolate(double r_n1) const;
  /// r_n1 at which the boundary reaches r_n, nullopt above the sampled range.
  std::optional<double> preimage(double r_n) const;
  /// Local slope d log R_{n+1} / d log R_n of the boundary.
  double log_slope(double r_n1) const;
  /// Largest R_n + a R_{n+1} over the sampled boundary (supporting-line view).
  double functional_max(double a) const;

 private:
  double asymptote(double r_n1) const;

  int order_ = 0;
  std::vector<ThresholdSample> samples_;
  MonotoneCubic log_curve_;
};

/// Log-spaced grid of R_{n+1} values.
struct ThresholdGrid {
  double r_n1_min = 1e-16;
  double r_n1_max = 1e-2;
  int points = 200;

  std::vector<double> values() const;
};

/// Exact boundary at each grid value. Throws SolverError if a grid value is not
/// reachable on the locus or the result is not strictly increasing.
ThresholdCurve threshold_exact(int n, std::span<const double> r_n1_grid, const SolverOptions& options = {});
ThresholdCurve threshold_exact(int n, const ThresholdGrid& grid = {}, const SolverOptions& options = {});

/// Boundary over the whole traced locus, logit-spaced in R_{n+1} from
/// max(locus_min, r_n1_floor) to locus_max. Covers the large error rates that
/// the (0, 0.5) grid of threshold_exact excludes.
ThresholdCurve threshold_locus_curve(const ThresholdSolver& solver, int points = 400, double r_n1_floor = 1e-16);

/// Small-squeezing parametrisation of the boundary at the Hermite anchor,
/// returning (R_n, R_{n+1}) for parameter t > 0.
std::pair<double, double> threshold_param_approx(int n, double t);

/// Closed-form asymptote R_n = [H_n^4 (R_{n+1} / (2 (n+1)^3))^n]^{1/(n+2)}.
double threshold_closed_form(int n, double r_n1);
/// Inverse of threshold_closed_form.
double threshold_closed_form_inverse(int n, double r_n);

enum class QngVerdict { qng, not_qng };

struct FunctionalCheck {
  QngVerdict verdict = QngVerdict::not_qng;
  ThresholdRegime regime = ThresholdRegime::interpolated;
  double threshold = 0.0;
};

/// QNG iff r_n exceeds the boundary at r_n1. Throws RangeError when r_n1 lies
/// above the curve.
FunctionalCheck functional_check(double r_n, double r_n1, const ThresholdCurve& curve);

/// Number of worker threads: QNG_THREADS if set, else hardware concurrency.
int worker_count();

}  // namespace qng

#endif  // QNG_THRESHOLD_ENGINE_H
