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

#ifndef QNG_WITNESS_H
#define QNG_WITNESS_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qng/detector_model.h"
#include "qng/gaussian_core.h"
#include "qng/threshold_engine.h"

namespace qng {

struct CountRecord {
  int order = 1;
  std::uint64_t trials = 0;
  /// Coincidences on the designated n channels.
  std::uint64_t count_n = 0;
  /// Coincidences on all n+1 channels.
  std::uint64_t count_n1 = 0;
  /// Optional counts for each of the n+1 subsets of n channels. Subset j
  /// leaves out channel j; the designated subset leaves out channel n.
  std::vector<std::uint64_t> subsets;

  /// Throws InputError when counts are inconsistent.
  void validate() const;
};

/// Posterior mode and minimum-width 68% credible interval under a uniform prior.
struct IntervalEstimate {
  double point = 0.0;
  double lo = 0.0;
  double hi = 1.0;
};

inline constexpr double kCredibleMass = 0.68;

IntervalEstimate bayes_interval(std::uint64_t k, std::uint64_t trials);
/// Same with a fractional count (used for subset means).
IntervalEstimate bayes_interval(double k, double trials);

enum class SubsetPolicy { designated, mean };

struct RateEstimate {
  IntervalEstimate r_n;
  IntervalEstimate r_n1;
  SubsetPolicy policy = SubsetPolicy::designated;
  /// Trials entering the r_n posterior. Subset counts are strongly
  /// correlated, so averaging them does not add information beyond one
  /// subset; the mean count is used with the plain trial number.
  double effective_trials = 0.0;
};

RateEstimate estimate_rates(const CountRecord& rec, SubsetPolicy policy = SubsetPolicy::designated);

enum class VerdictState { positive, inconclusive, negative, no_data };

std::string to_string(VerdictState s);

enum class DepthKind { finite, unbounded, not_qng_at_source };

struct Depth {
  DepthKind kind = DepthKind::finite;
  double db = 0.0;
};

std::string to_string(const Depth& d);

struct Verdict {
  VerdictState state = VerdictState::no_data;
  RateEstimate rates;
  /// Horizontal distance log10(preimage(r_n) / r_n1); positive above the
  /// curve. Infinite when r_n1 = 0, NaN when r_n lies above the curve range.
  double d_n = 0.0;
  /// Vertical distance log10(r_n / curve(r_n1)).
  double d_n1 = 0.0;
  ThresholdRegime regime = ThresholdRegime::interpolated;
  std::optional<Depth> depth;
  /// Depth bracket from the rectangle corners.
  std::optional<Depth> depth_lo;
  std::optional<Depth> depth_hi;
};

/// Credible-rectangle test against the curve. Depth is attached for records
/// whose point estimate is above the curve, using attenuation scaling of the
/// rates (R_n ~ eta^n, R_{n+1} ~ eta^{n+1}).
Verdict classify(const CountRecord& rec, const ThresholdCurve& curve, SubsetPolicy policy = SubsetPolicy::designated);

/// Depth of a rate pair under the attenuation scaling R_n ~ eta^n,
/// R_{n+1} ~ eta^{n+1}, to 0.01 dB.
Depth rate_scaling_depth(double r_n, double r_n1, const ThresholdCurve& curve);

struct PathPoint {
  double db = 0.0;
  double eta = 1.0;
  ClickPair clicks;
};

PathPoint path_point(const PhotonDistribution& dist, int n, int channels, double db);

/// Click pairs of the attenuated state at 0, step, 2 step, ... up to max_db.
std::vector<PathPoint> attenuation_path(const PhotonDistribution& dist, int n, int channels, double step_db,
                                        double max_db);

inline constexpr double kDepthResolutionDb = 0.01;

/// Largest attenuation in dB at which the state stays above the curve.
Depth qng_depth(const PhotonDistribution& dist, int n, int channels, const ThresholdCurve& curve);

/// Transmittance below which attenuated |m> fails the n = 1 criterion on a
/// two-channel detector.
double fock_single_criterion_transmittance(int m, const ThresholdSolver& solver);
double fock_single_criterion_transmittance(int m);

}  // namespace qng

#endif  // QNG_WITNESS_H
