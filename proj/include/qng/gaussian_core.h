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
#ifndef QNG_GAUSSIAN_CORE_H
#define QNG_GAUSSIAN_CORE_H

#include <optional>
#include <vector>

#include "qng/numeric.h"

namespace qng {

/// Pure single-mode Gaussian state in the squeezing frame.
///
/// `beta` is the displacement magnitude in quadrature units where the vacuum
/// variance is 1. With this convention a coherent state (variance 1) carries
/// a mean photon number of beta^2 / 4. `variance` is the minimal quadrature
/// variance V and `phi` the angle between the squeezed axis and the
/// displacement.
struct GaussianModeParams {
  double beta = 0.0;
  double variance = 1.0;
  double phi = 0.0;

  static GaussianModeParams vacuum() { return {}; }
  /// Throws DomainError unless beta >= 0 and 0 < variance <= 1.
  void validate() const;
};

struct MultimodeGaussianState {
  std::vector<GaussianModeParams> modes;

  void validate() const;
};

/// Photon-number probabilities P_0..P_K plus a bound on the mass beyond K.
struct PhotonDistribution {
  std::vector<double> probs;
  double tail_bound = 0.0;

  static PhotonDistribution vacuum() { return {{1.0}, 0.0}; }
  static PhotonDistribution fock(int n);

  int truncation() const { return static_cast<int>(probs.size()) - 1; }
  double at(int m) const { return m >= 0 && m < static_cast<int>(probs.size()) ? probs[m] : 0.0; }
  double total() const;
  double mean() const;
  /// Checks non-negativity and that total + tail_bound is 1 within 1e-9.
  void validate() const;
};

/// Mean photon number of a coherent state (variance 1) with displacement beta.
constexpr double coherent_mean_photons(double beta) { return beta * beta / 4.0; }

inline constexpr double kCoherentLimitGap = 1e-6;
inline constexpr double kDefaultTailTolerance = 1e-10;
inline constexpr int kMaxTruncation = 256;

/// Vacuum probability after a beam splitter of transmittance tau, closed form
/// with mu(V) = 2V + tau (1 - V). Templated so callers can evaluate it in
/// extended precision when an alternating sum follows.
template <typename T>
T vacuum_probability_kernel(T beta, T variance, T cos2, T sin2, T tau) {
  const T one = 1;
  const T mu_v = 2 * variance + tau * (one - variance);
  const T inv = one / variance;
  const T mu_inv = 2 * inv + tau * (one - inv);
  const T exponent = -beta * beta * tau / 2 * (cos2 / mu_inv + sin2 / mu_v);
  return 2 * fp::exp(exponent) / fp::sqrt(mu_v * mu_inv);
}

double vacuum_probability(const GaussianModeParams& state, double tau);

double vacuum_probability_multimode(const MultimodeGaussianState& state, double tau);

/// Same product evaluated in binary128.
quad vacuum_probability_multimode_quad(const MultimodeGaussianState& state, quad tau);

/// Photon statistics of an amplitude-squeezed coherent state (phi = 0).
///
/// Evaluated through the normalised amplitude recurrence
///   c_{m+1} = sqrt(rho) sqrt(2/(m+1)) y c_m - rho sqrt(m/(m+1)) c_{m-1},
/// with rho = (1-V)/(1+V) and y = beta sqrt(V / (2 (1 - V^2))), so that
/// P_m = c_m^2 never overflows even where H_m(y) would. Requests with
/// V > 1 - 1e-6 are served by the Poisson limit.
///
/// Without an explicit truncation the smallest K whose tail bound is below
/// `tail_tolerance` is used (capped at 256). Throws UnsupportedError for
/// phi != 0 and PrecisionError when the truncation cannot reach the tolerance.
PhotonDistribution gaussian_photodistribution(
    const GaussianModeParams& state, std::optional<int> truncation = std::nullopt,
    double tail_tolerance = kDefaultTailTolerance);

/// Poisson distribution with the given mean.
PhotonDistribution coherent_limit_photodistribution(
    double mean_photons, std::optional<int> truncation = std::nullopt,
    double tail_tolerance = kDefaultTailTolerance);

/// Rigorous upper bound on sum_{m > K} P_m for a phi = 0 Gaussian state, from
/// Cramer's inequality |H_m(y)| <= k 2^{m/2} sqrt(m!) e^{y^2/2}. Returns the
/// natural log of the bound.
double gaussian_log_tail_bound(double beta, double variance, int truncation);

}  // namespace qng

#endif  // QNG_GAUSSIAN_CORE_H
