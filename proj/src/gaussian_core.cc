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
#include "qng/gaussian_core.h"

#include <cmath>
#include <numbers>
#include <string>

#include "qng/errors.h"

namespace qng {

namespace {

// Cramer's constant for physicists' Hermite polynomials.
constexpr double kCramer = 1.086435;

bool phi_is_amplitude_aligned(double phi) {
  double r = std::remainder(phi, std::numbers::pi);
  return std::abs(r) < 1e-12;
}

}  // namespace

void GaussianModeParams::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be finite and non-negative, got " + std::to_string(beta));
  }
  if (!(variance > 0.0 && variance <= 1.0)) {
    throw DomainError("minimal variance must lie in (0, 1], got " + std::to_string(variance));
  }
  if (!std::isfinite(phi)) throw DomainError("phi must be finite");
}

void MultimodeGaussianState::validate() const {
  if (modes.empty()) throw DomainError("a multimode state needs at least one mode");
  for (const auto& m : modes) m.validate();
}

PhotonDistribution PhotonDistribution::fock(int n) {
  if (n < 0) throw DomainError("Fock state needs n >= 0");
  PhotonDistribution d;
  d.probs.assign(n + 1, 0.0);
  d.probs[n] = 1.0;
  return d;
}

double PhotonDistribution::total() const { return compensated_sum(probs); }

double PhotonDistribution::mean() const {
  CompensatedSum<> s;
  for (size_t m = 0; m < probs.size(); ++m) s.add(static_cast<double>(m) * probs[m]);
  return s.value();
}

void PhotonDistribution::validate() const {
  if (probs.empty()) throw DomainError("photon distribution is empty");
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("photon probabilities must be finite and >= 0");
  }
  if (!(tail_bound >= 0.0)) throw DomainError("tail bound must be >= 0");
  double s = total() + tail_bound;
  if (s < 1.0 - 1e-9 || total() > 1.0 + 1e-9) {
    throw DomainError("photon distribution is not normalised: sum = " + std::to_string(s));
  }
}

static void check_tau(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw DomainError("transmittance must lie in [0, 1], got " + std::to_string(tau));
  }
}

double vacuum_probability(const GaussianModeParams& state, double tau) {
  state.validate();
  check_tau(tau);
  double c = std::cos(state.phi);
  double s = std::sin(state.phi);
  return vacuum_probability_kernel<double>(state.beta, state.variance, c * c, s * s, tau);
}

double vacuum_probability_multimode(const MultimodeGaussianState& state, double tau) {
  state.validate();
  check_tau(tau);
  double p = 1.0;
  for (const auto& m : state.modes) {
    double c = std::cos(m.phi);
    double s = std::sin(m.phi);
    p *= vacuum_probability_kernel<double>(m.beta, m.variance, c * c, s * s, tau);
  }
  return p;
}

quad vacuum_probability_multimode_quad(const MultimodeGaussianState& state, quad tau) {
  quad p = 1;
  for (const auto& m : state.modes) {
    quad c = cosq(static_cast<quad>(m.phi));
    quad s = sinq(static_cast<quad>(m.phi));
    p *= vacuum_probability_kernel<quad>(m.beta, m.variance, c * c, s * s, tau);
  }
  return p;
}

double gaussian_log_tail_bound(double beta, double variance, int truncation) {
  const double v = variance;
  const double rho = (1.0 - v) / (1.0 + v);
  if (rho <= 0.0) return -INFINITY;
  const double y2 = beta * beta * v / (2.0 * (1.0 - v * v));
  const double log_a = std::log(2.0 * std::sqrt(v) / (1.0 + v)) - beta * beta * v / (2.0 * (1.0 + v));
  return log_a + 2.0 * std::log(kCramer) + y2 + (truncation + 1) * std::log(rho) - std::log1p(-rho);
}

namespace {

// Grows a distribution term by term until the tail estimate drops below the
// tolerance, or fills exactly `fixed` terms when a truncation was requested.
template <typename NextTerm>
PhotonDistribution accumulate(NextTerm&& next, std::optional<int> fixed, double tol,
                              const auto& log_tail_bound) {
  PhotonDistribution d;
  CompensatedSum<> sum;
  const int cap = fixed ? *fixed : kMaxTruncation;
  if (cap < 0) throw DomainError("truncation must be >= 0");
  for (int m = 0; m <= cap; ++m) {
    double p = next(m);
    d.probs.push_back(p);
    sum.add(p);
    double complement = std::max(0.0, 1.0 - sum.value()) + 1e-14;
    double analytic = std::exp(log_tail_bound(m));
    d.tail_bound = std::min(complement, analytic);
    if (!fixed && d.tail_bound < tol) return d;
  }
  if (d.tail_bound >= tol) {
    throw PrecisionError("truncation K=" + std::to_string(cap) + " leaves tail bound " +
                         std::to_string(d.tail_bound) + " above tolerance");
  }
  return d;
}

}  // namespace

PhotonDistribution coherent_limit_photodistribution(double mean_photons, std::optional<int> truncation,
                                                    double tail_tolerance) {
  if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons)) {
    throw DomainError("mean photon number must be finite and >= 0");
  }
  if (mean_photons == 0.0) {
    PhotonDistribution d = PhotonDistribution::vacuum();
    if (truncation) d.probs.resize(*truncation + 1, 0.0);
    return d;
  }
  const double log_mean = std::log(mean_photons);
  auto term = [&](int m) { return std::exp(m * log_mean - mean_photons - std::lgamma(m + 1.0)); };
  // Chernoff-free geometric bound once m exceeds the mean: ratios mean/(m+1) < 1.
  auto log_tail = [&](int m) {
    double ratio = mean_photons / (m + 2.0);
    if (ratio >= 1.0) return static_cast<double>(INFINITY);
    return (m + 1) * log_mean - mean_photons - std::lgamma(m + 2.0) - std::log1p(-ratio);
  };
  return accumulate(term, truncation, tail_tolerance, log_tail);
}

PhotonDistribution gaussian_photodistribution(const GaussianModeParams& state, std::optional<int> truncation,
                                              double tail_tolerance) {
  state.validate();
  if (!phi_is_amplitude_aligned(state.phi)) {
    throw UnsupportedError("photon statistics formula requires phi = 0");
  }
  const double v = state.variance;
  const double beta = state.beta;
  if (v > 1.0 - kCoherentLimitGap) {
    return coherent_limit_photodistribution(coherent_mean_photons(beta), truncation, tail_tolerance);
  }
  const double rho = (1.0 - v) / (1.0 + v);
  const double sqrt_rho = std::sqrt(rho);
  const double y = beta * std::sqrt(v / (2.0 * (1.0 - v * v)));
  const double c0 = std::sqrt(2.0 * std::sqrt(v) / (1.0 + v)) * std::exp(-beta * beta * v / (4.0 * (1.0 + v)));
  double prev = 0.0;
  double cur = c0;
  auto term = [&](int m) {
    if (m > 0) {
      double next = sqrt_rho * std::sqrt(2.0 / m) * y * cur - rho * std::sqrt((m - 1.0) / m) * prev;
      prev = cur;
      cur = next;
    }
    return cur * cur;
  };
  auto log_tail = [&](int m) { return gaussian_log_tail_bound(beta, v, m); };
  return accumulate(term, truncation, tail_tolerance, log_tail);
}

}  // namespace qng
