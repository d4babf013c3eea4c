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

#ifndef QNG_SOURCE_SIM_H
#define QNG_SOURCE_SIM_H

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qng/detector_model.h"
#include "qng/gaussian_core.h"
#include "qng/threshold_engine.h"
#include "qng/witness.h"

namespace qng {

/// Photon-number distribution of one heralded window, truncated at three.
struct HeraldedSourceModel {
  double p1 = 1.0;
  double p2 = 0.0;
  double p3 = 0.0;

  double p0() const { return 1.0 - p1 - p2 - p3; }
  /// Throws DomainError for negative entries or a sum above one.
  void validate() const;
  /// Human-readable notes for suspicious but legal parameters.
  std::vector<std::string> warnings() const;
  PhotonDistribution window() const;
};

struct ExperimentModel {
  HeraldedSourceModel source;
  /// Number of heralded windows merged into one detection unit.
  int merge_count = 1;
  DetectorConfig detector{2, 1.0};
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 0;

  /// Criterion order the model is built for (the merge count).
  int order() const { return merge_count; }
  void validate() const;
};

/// Model whose detector has n+1 channels, as used for certification.
ExperimentModel certification_model(const HeraldedSourceModel& source, int n, double efficiency,
                                    std::uint64_t trials = 1000000, std::uint64_t seed = 0);

/// Merged windows before detector loss.
PhotonDistribution pre_loss_state(const ExperimentModel& model);
/// Merged windows after detector loss.
PhotonDistribution merged_state(const ExperimentModel& model);

/// Event-level sampler: per trial the photon number is drawn from the
/// pre-loss state, each photon survives with the detector efficiency and lands
/// in a uniformly chosen channel; a channel clicks if it receives any photon.
/// Trial i uses Philox substream i of the seed.
CountRecord simulate_counts(const ExperimentModel& model, std::uint64_t seed);

struct SuiteEntry {
  /// Merged photons of the state.
  int state_n = 0;
  /// Criterion order it is tested against (detector with order+1 channels).
  int order = 0;
  ClickPair clicks;
  CountRecord expected_counts;
  Verdict verdict;
  Depth depth;
};

using CurveProvider = std::function<const ThresholdCurve&(int order)>;

/// Curves over the whole traced locus, cached per order.
const ThresholdCurve& default_curve(int order);

/// Every state n in n_range against every criterion order in order_range,
/// analytically. Counts are expected counts at `trials`, rounded.
std::vector<SuiteEntry> reproduce_experiment_suite(double p1, double p2, double efficiency,
                                                   const std::vector<int>& n_range, std::uint64_t trials,
                                                   const std::vector<int>& order_range = {},
                                                   const CurveProvider& curves = default_curve);

}  // namespace qng

#endif  // QNG_SOURCE_SIM_H
