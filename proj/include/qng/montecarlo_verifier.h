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

#ifndef QNG_MONTECARLO_VERIFIER_H
#define QNG_MONTECARLO_VERIFIER_H

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "qng/gaussian_core.h"
#include "qng/threshold_engine.h"

namespace qng {

/// Violations are samples whose R_n exceeds the boundary by more than this.
inline constexpr double kViolationTolerance = 1e-10;
inline constexpr int kClosestPoints = 50;

struct McSample {
  std::uint64_t index = 0;
  std::vector<GaussianModeParams> modes;
  double r_n = 0.0;
  double r_n1 = 0.0;
  double threshold = 0.0;
  /// log10(r_n / threshold); negative below the boundary.
  double log_gap = 0.0;
  ThresholdRegime regime = ThresholdRegime::interpolated;
};

struct McReport {
  int order = 0;
  int modes = 0;
  std::uint64_t runs = 0;
  std::uint64_t seed = 0;
  std::uint64_t violations = 0;
  /// Samples with R_{n+1} below the traced locus, compared to the asymptote.
  std::uint64_t asymptotic_samples = 0;
  /// Samples with R_{n+1} above the traced locus; no Gaussian boundary exists
  /// there to compare against, so they are counted but never violations.
  std::uint64_t out_of_range = 0;
  /// Signed log10 gap of the closest sample (largest log_gap).
  double min_signed_log_distance = -INFINITY;
  double tolerance = kViolationTolerance;
  bool beyond_paper = false;
  /// Closest samples first; ties broken by sample index.
  std::vector<McSample> closest_points;
};

/// Exact boundary for one order, shared by verifier calls. Screening uses a
/// dense interpolated curve; samples close to it are re-solved exactly.
class BoundaryOracle {
 public:
  explicit BoundaryOracle(int order, SolverOptions options = {});

  int order() const { return solver_.order(); }
  const ThresholdSolver& solver() const { return solver_; }
  const ThresholdCurve& curve() const { return curve_; }

  /// Boundary at r_n1 for a point with success rate r_n. Returns nullopt
  /// above the locus.
  std::optional<ThresholdValue> threshold(double r_n, double r_n1) const;

 private:
  ThresholdSolver solver_;
  ThresholdCurve curve_;
  double screen_margin_ = 0.0;
};

using ProgressFn = std::function<void(std::uint64_t done, std::uint64_t total)>;

/// Uniform sampling of beta^2 in (0, 2n), V in (1/(n+2), 1) and phi in
/// (0, 2 pi) per mode, compared against the order-n boundary.
McReport verify(int n, int modes, std::uint64_t runs, std::uint64_t seed, const ProgressFn& progress = {});
McReport verify(const BoundaryOracle& oracle, int modes, std::uint64_t runs, std::uint64_t seed,
                const ProgressFn& progress = {});

/// Gaussian perturbations of (beta, V, phi) around a boundary witness, with
/// relative scale jitter_scale on beta and V and absolute scale on phi.
McReport boundary_probe(const BoundaryOracle& oracle, const ThresholdSample& point, double jitter_scale,
                        std::uint64_t trials, std::uint64_t seed);

/// Shared oracle per order, built on first use.
const BoundaryOracle& boundary_oracle(int order);

}  // namespace qng

#endif  // QNG_MONTECARLO_VERIFIER_H
