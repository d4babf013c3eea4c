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
#ifndef QNG_DETECTOR_MODEL_H
#define QNG_DETECTOR_MODEL_H

#include <span>
#include <vector>

#include "qng/gaussian_core.h"

namespace qng {

/// Balanced N-channel array of binary (click / no-click) detectors.
struct DetectorConfig {
  int channels = 2;
  double efficiency = 1.0;

  void validate() const;
};

/// Success and error probabilities for criterion order n: `r_n` is the
/// probability that n designated channels all click, `r_n1` that all n+1 do.
struct ClickPair {
  int order = 1;
  double r_n = 0.0;
  double r_n1 = 0.0;
};

/// Probability that m photons spread uniformly over N channels fire a fixed set
/// of n channels, from the alternating inclusion-exclusion sum.
double transfer_matrix_element(int n, int m, int channels);

/// Summed-up forms of the transfer matrix, valid for m in {n, n+1, n+2}.
double transfer_matrix_closed_form(int n, int m, int channels);

/// Rows n and n+1 of the transfer matrix for m = 0..max_photons.
struct TransferRows {
  std::vector<double> success;
  std::vector<double> error;
};
TransferRows transfer_rows(int n, int channels, int max_photons);

/// Click pair of a phase-insensitive state given through its photon statistics.
/// Needs channels >= n + 1 and a tail bound below 1e-12.
ClickPair click_probabilities(const PhotonDistribution& dist, int n, int channels);

/// Click pair of a product Gaussian state from vacuum probabilities at k/N.
///
/// The alternating sum is accumulated with compensation; when either result
/// is below 1e-3 of the summed term magnitudes it is recomputed in binary128,
/// so values down to ~1e-20 keep close to full double precision.
ClickPair click_probabilities_gaussian(const MultimodeGaussianState& state, int n, int channels);

/// Binomial loss channel with transmittance eta.
PhotonDistribution attenuate(const PhotonDistribution& dist, double eta);

/// Photon statistics of independent modes detected together (convolution).
PhotonDistribution merge(std::span<const PhotonDistribution> dists);

}  // namespace qng

#endif  // QNG_DETECTOR_MODEL_H
