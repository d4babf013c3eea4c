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
#include "qng/hermite.h"

#include <cmath>
#include <string>
#include <vector>

#include "qng/errors.h"

namespace qng {

double HermiteValue::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }

HermiteValue hermite_eval(int n, double x) {
  if (n < 0) throw DomainError("Hermite order must be >= 0");
  // Recurrence on h_m = H_m / sqrt(2^m m!) with periodic rescaling; the scale
  // is carried in log form.
  double log_scale = 0.0;
  double prev = 0.0;
  double cur = 1.0;
  for (int m = 0; m < n; ++m) {
    double next = std::sqrt(2.0 / (m + 1)) * x * cur - std::sqrt(static_cast<double>(m) / (m + 1)) * prev;
    prev = cur;
    cur = next;
    double a = std::abs(cur);
    if (a > 1e150) {
      prev /= a;
      cur /= a;
      log_scale += std::log(a);
    }
  }
  if (cur == 0.0) return {-INFINITY, 0};
  double log_norm = 0.5 * (n * std::log(2.0) + std::lgamma(n + 1.0));
  return {std::log(std::abs(cur)) + log_scale + log_norm, cur > 0 ? 1 : -1};
}

namespace {

double bisect_root(int order, double lo, double hi) {
  int sign_lo = hermite_eval(order, lo).sign;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    int s = hermite_eval(order, mid).sign;
    if (s == 0) return mid;
    if (s == sign_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

HermiteAnchor hermite_anchor(int n) {
  if (n < 0) throw DomainError("anchor order must be >= 0");
  if (n == 0) return {0, 0.0, 1.0};
  const int order = n + 1;
  std::vector<double> roots;
  if (order % 2 == 1) roots.push_back(0.0);
  const double upper = std::sqrt(4.0 * order + 2.0);
  const int steps = 4000;
  double prev_x = 1e-9;
  int prev_sign = hermite_eval(order, prev_x).sign;
  for (int i = 1; i <= steps; ++i) {
    double x = upper * i / steps;
    int s = hermite_eval(order, x).sign;
    if (s != prev_sign) roots.push_back(bisect_root(order, prev_x, x));
    prev_x = x;
    prev_sign = s;
  }
  if (static_cast<int>(roots.size()) != (order + 1) / 2) {
    throw SolverError("found " + std::to_string(roots.size()) + " non-negative roots of H_" +
                      std::to_string(order));
  }
  HermiteAnchor best{n, 0.0, -1.0};
  for (double r : roots) {
    HermiteValue h = hermite_eval(n, r);
    double h2 = h.sign == 0 ? 0.0 : std::exp(2.0 * h.log_magnitude);
    bool tie = std::abs(h2 - best.h_n_sq) <= 1e-12 * std::max(1.0, h2);
    if (h2 > best.h_n_sq && !tie) {
      best = {n, r, h2};
    } else if (tie && r > best.x_star) {
      best = {n, r, h2};
    }
  }
  return best;
}

}  // namespace qng
