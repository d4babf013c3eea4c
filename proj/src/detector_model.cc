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
#include "qng/detector_model.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "qng/errors.h"

namespace qng {

void DetectorConfig::validate() const {
  if (channels < 1) throw DomainError("detector needs at least one channel");
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw DomainError("detector efficiency must lie in [0, 1]");
}

double transfer_matrix_element(int n, int m, int channels) {
  if (channels < 1 || n < 0 || m < 0) throw DomainError("transfer matrix needs n, m >= 0 and N >= 1");
  if (n > channels) {
    throw DomainError("cannot fire " + std::to_string(n) + " of " + std::to_string(channels) + " channels");
  }
  if (n > m) return 0.0;
  CompensatedSum<> sum;
  sum.add(1.0);
  for (int k = 1; k <= n; ++k) {
    double term = binomial(n, k) * std::pow(1.0 - static_cast<double>(k) / channels, m);
    sum.add(k % 2 ? -term : term);
  }
  return std::clamp(sum.value(), 0.0, 1.0);
}

double transfer_matrix_closed_form(int n, int m, int channels) {
  if (channels < 1 || n < 0 || n > channels) throw DomainError("transfer matrix needs 0 <= n <= N");
  const double N = channels;
  const double nn = n;
  auto fact = [](int k) { return std::tgamma(k + 1.0); };
  if (m == n) return fact(n) / std::pow(N, n);
  if (m == n + 1) return fact(n + 1) / std::pow(N, n) * (1.0 - nn / (2.0 * N));
  if (m == n + 2) {
    return fact(n + 2) / (24.0 * std::pow(N, n + 2)) * (nn + 3.0 * nn * nn - 12.0 * nn * N + 12.0 * N * N);
  }
  throw UnsupportedError("closed form exists only for m in {n, n+1, n+2}");
}

TransferRows transfer_rows(int n, int channels, int max_photons) {
  TransferRows rows;
  rows.success.resize(max_photons + 1);
  rows.error.resize(max_photons + 1);
  for (int m = 0; m <= max_photons; ++m) {
    rows.success[m] = transfer_matrix_element(n, m, channels);
    rows.error[m] = transfer_matrix_element(n + 1, m, channels);
  }
  return rows;
}

static void check_order(int n, int channels) {
  if (n < 1) throw DomainError("criterion order must be >= 1");
  if (channels < n + 1) throw DomainError("criterion order n needs at least n+1 channels");
}

ClickPair click_probabilities(const PhotonDistribution& dist, int n, int channels) {
  check_order(n, channels);
  if (!(dist.tail_bound < 1e-12)) {
    throw PrecisionError("photon distribution tail bound " + std::to_string(dist.tail_bound) +
                         " too large for click probabilities");
  }
  const int k = dist.truncation();
  TransferRows rows = transfer_rows(n, channels, k);
  CompensatedSum<> rn;
  CompensatedSum<> rn1;
  for (int m = n; m <= k; ++m) {
    rn.add(rows.success[m] * dist.probs[m]);
    rn1.add(rows.error[m] * dist.probs[m]);
  }
  ClickPair out{n, std::clamp(rn.value(), 0.0, 1.0), std::clamp(rn1.value(), 0.0, 1.0)};
  out.r_n1 = std::min(out.r_n1, out.r_n);
  return out;
}

namespace {

template <typename T, typename VacuumFn>
T inclusion_exclusion(int n, VacuumFn&& vacuum) {
  CompensatedSum<T> sum;
  sum.add(T(1));
  for (int k = 1; k <= n; ++k) {
    T term = static_cast<T>(binomial(n, k)) * vacuum(k);
    sum.add(k % 2 ? -term : term);
  }
  return sum.value();
}

}  // namespace

ClickPair click_probabilities_gaussian(const MultimodeGaussianState& state, int n, int channels) {
  check_order(n, channels);
  state.validate();
  std::vector<double> p0(n + 2);
  for (int k = 0; k <= n + 1; ++k) {
    p0[k] = vacuum_probability_multimode(state, static_cast<double>(k) / channels);
  }
  auto vac = [&](int k) { return p0[k]; };
  double rn = inclusion_exclusion<double>(n, vac);
  double rn1 = inclusion_exclusion<double>(n + 1, vac);
  // Terms of magnitude ~mag cancel down to r; keep double only while
  // mag / r stays below 1e3 (relative error ~1e-13).
  auto magnitude = [&](int m) {
    double mag = 1.0;
    for (int k = 1; k <= m; ++k) mag += binomial(m, k) * p0[k];
    return mag;
  };
  if (rn < 1e-3 * magnitude(n) || rn1 < 1e-3 * magnitude(n + 1)) {
    std::vector<quad> q0(n + 2);
    for (int k = 0; k <= n + 1; ++k) {
      q0[k] = vacuum_probability_multimode_quad(state, static_cast<quad>(k) / channels);
    }
    auto vq = [&](int k) { return q0[k]; };
    rn = static_cast<double>(inclusion_exclusion<quad>(n, vq));
    rn1 = static_cast<double>(inclusion_exclusion<quad>(n + 1, vq));
  }
  ClickPair out{n, std::clamp(rn, 0.0, 1.0), std::clamp(rn1, 0.0, 1.0)};
  out.r_n1 = std::min(out.r_n1, out.r_n);
  return out;
}

PhotonDistribution attenuate(const PhotonDistribution& dist, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("transmittance must lie in [0, 1]");
  if (eta == 1.0) return dist;
  const int k_max = dist.truncation();
  if (eta == 0.0) {
    PhotonDistribution out = PhotonDistribution::vacuum();
    out.probs[0] = dist.total();
    out.tail_bound = dist.tail_bound;
    return out;
  }
  const double log_eta = std::log(eta);
  const double log_loss = std::log1p(-eta);
  PhotonDistribution out;
  out.probs.assign(k_max + 1, 0.0);
  for (int k = 0; k <= k_max; ++k) {
    CompensatedSum<> s;
    for (int m = k; m <= k_max; ++m) {
      if (dist.probs[m] == 0.0) continue;
      double log_w = std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0) + k * log_eta +
                     (m - k) * log_loss;
      s.add(std::exp(log_w) * dist.probs[m]);
    }
    out.probs[k] = s.value();
  }
  // Mass beyond K only moves downwards; it may land inside the window, so the
  // old bound stays valid.
  out.tail_bound = dist.tail_bound;
  return out;
}

PhotonDistribution merge(std::span<const PhotonDistribution> dists) {
  PhotonDistribution out = PhotonDistribution::vacuum();
  for (const auto& d : dists) {
    std::vector<double> conv(out.probs.size() + d.probs.size() - 1, 0.0);
    for (size_t i = 0; i < out.probs.size(); ++i) {
      if (out.probs[i] == 0.0) continue;
      for (size_t j = 0; j < d.probs.size(); ++j) conv[i + j] += out.probs[i] * d.probs[j];
    }
    // Missing mass of the product is at most the union of the missing masses.
    out.tail_bound = out.tail_bound + d.tail_bound;
    out.probs = std::move(conv);
  }
  return out;
}

}  // namespace qng
