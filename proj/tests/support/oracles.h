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

// Independent reference computations for the test suites. None of these
// call into the code paths they check.
#ifndef QNG_TESTS_ORACLES_H
#define QNG_TESTS_ORACLES_H

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qng/detector_model.h"
#include "qng/gaussian_core.h"

namespace qng::oracle {

// Probability that channels 0..n-1 all receive a photon when m photons are
// spread uniformly over N channels, by enumerating occupation numbers with
// multinomial weights.
inline double multinomial_transfer(int n, int m, int channels) {
  double total = 0.0;
  std::vector<int> occ(channels, 0);
  const double log_norm = std::lgamma(m + 1.0) - m * std::log(static_cast<double>(channels));
  std::function<void(int, int, double)> rec = [&](int ch, int left, double log_w) {
    if (ch == channels - 1) {
      occ[ch] = left;
      const double w = log_w - std::lgamma(left + 1.0);
      bool ok = true;
      for (int i = 0; i < n; ++i) ok = ok && occ[i] > 0;
      if (ok) total += std::exp(log_norm + w);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      occ[ch] = k;
      rec(ch + 1, left - k, log_w - std::lgamma(k + 1.0));
    }
  };
  rec(0, m, 0.0);
  return total;
}

// Product of two polynomials given by coefficient lists.
inline std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Binomial loss written as an explicit double sum.
inline std::vector<double> binomial_loss(const std::vector<double>& p, double eta) {
  std::vector<double> out(p.size(), 0.0);
  for (size_t m = 0; m < p.size(); ++m) {
    for (size_t k = 0; k <= m; ++k) {
      double c = 1.0;
      for (size_t i = 0; i < k; ++i) c = c * (m - i) / (i + 1);
      out[k] += p[m] * c * std::pow(eta, k) * std::pow(1 - eta, m - k);
    }
  }
  return out;
}

struct GridOptimum {
  double r_n = 0.0;
  double beta = 0.0;
  double variance = 1.0;
};

// Largest R_n of a pure phi = 0 Gaussian state with R_{n+1} = target on an
// (n+1)-channel detector: dense grid over (beta^2, V) with V >= 1/(n+2),
// crossing detection in beta on every V line, bisection, then golden-section
// refinement in V.
inline GridOptimum grid_search_threshold(int n, double target, int v_points = 160, int b_points = 400,
                                          double b2_max = 400.0) {
  auto rates = [&](double beta, double v) {
    return click_probabilities_gaussian(MultimodeGaussianState{{{beta, v, 0.0}}}, n, n + 1);
  };
  // R_{n+1} is not monotone in beta: displacement digs a narrow interference
  // valley into the squeezed-vacuum background, and the optimum sits on it.
  auto best_on_line = [&](double v, GridOptimum& best) {
    std::vector<double> bs(b_points + 1, 0.0), fs(b_points + 1);
    for (int j = 1; j <= b_points; ++j) {
      bs[j] = std::sqrt(std::exp(std::log(1e-10) + (std::log(b2_max) - std::log(1e-10)) * (j - 1) / (b_points - 1)));
    }
    for (int j = 0; j <= b_points; ++j) fs[j] = rates(bs[j], v).r_n1 - target;
    auto crossing = [&](double lo, double hi) {
      const bool rising = rates(hi, v).r_n1 > target;
      for (int k = 0; k < 80; ++k) {
        const double mid = 0.5 * (lo + hi);
        ((rates(mid, v).r_n1 - target > 0) == rising ? hi : lo) = mid;
      }
      const double bb = 0.5 * (lo + hi);
      const ClickPair at = rates(bb, v);
      if (std::abs(at.r_n1 / target - 1) < 1e-6 && at.r_n > best.r_n) best = {at.r_n, bb, v};
    };
    for (int j = 1; j <= b_points; ++j) {
      if ((fs[j] > 0) != (fs[j - 1] > 0)) crossing(bs[j - 1], bs[j]);
    }
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (int j = 1; j < b_points; ++j) {
      if (!(fs[j] <= fs[j - 1] && fs[j] <= fs[j + 1] && fs[j - 1] > 0 && fs[j + 1] > 0)) continue;
      double a = bs[j - 1], b = bs[j + 1];
      double x1 = b - g * (b - a), x2 = a + g * (b - a);
      double f1 = rates(x1, v).r_n1, f2 = rates(x2, v).r_n1;
      for (int it = 0; it < 100; ++it) {
        if (f1 < f2) {
          b = x2; x2 = x1; f2 = f1; x1 = b - g * (b - a); f1 = rates(x1, v).r_n1;
        } else {
          a = x1; x1 = x2; f1 = f2; x2 = a + g * (b - a); f2 = rates(x2, v).r_n1;
        }
      }
      const double bm = 0.5 * (a + b);
      if (rates(bm, v).r_n1 >= target) continue;
      crossing(bm, bs[j - 1]);
      crossing(bm, bs[j + 1]);
    }
  };
  GridOptimum best;
  const double t_lo = std::log(1e-8), t_hi = std::log(1.0 - 1.0 / (n + 2.0));
  double best_t = t_lo;
  for (int i = 0; i < v_points; ++i) {
    const double lt = t_lo + (t_hi - t_lo) * i / (v_points - 1);
    GridOptimum cand;
    best_on_line(1 - std::exp(lt), cand);
    if (cand.r_n > best.r_n) {
      best = cand;
      best_t = lt;
    }
  }
  const double step = (t_hi - t_lo) / (v_points - 1);
  double a = std::max(t_lo, best_t - step), b = std::min(t_hi, best_t + step);
  const double g = (std::sqrt(5.0) - 1) / 2;
  auto f = [&](double lt) {
    GridOptimum c;
    best_on_line(1 - std::exp(lt), c);
    if (c.r_n > best.r_n) best = c;
    return c.r_n;
  };
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      a = x1; x1 = x2; f1 = f2; x2 = a + g * (b - a); f2 = f(x2);
    } else {
      b = x2; x2 = x1; f2 = f1; x1 = b - g * (b - a); f1 = f(x1);
    }
  }
  return best;
}

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Minimum-width interval holding `mass` of Beta(k+1, trials-k+1): a level set
// of the density, found by bisection on the level with the enclosed mass from
// adaptive Gauss-Kronrod quadrature.
inline Interval beta_hpd_quadrature(double k, double trials, double mass) {
  const double a = k + 1, b = trials - k + 1;
  const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  auto pdf = [&](double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return std::exp(log_norm + (a - 1) * std::log(x) + (b - 1) * std::log1p(-x));
  };
  const double mode = k / trials;
  const double sd = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1)));
  auto integrate = [&](double lo, double hi) {
    double sum = 0.0;
    const int pieces = 16;
    for (int i = 0; i < pieces; ++i) {
      const double x0 = lo + (hi - lo) * i / pieces, x1 = lo + (hi - lo) * (i + 1) / pieces;
      sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(pdf, x0, x1, 10, 1e-11);
    }
    return sum;
  };
  const double peak = pdf(mode);
  auto level_edges = [&](double h) {
    Interval iv{mode, mode};
    if (k > 0) {
      double lo = std::max(0.0, mode - 40 * sd), hi = mode;
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (pdf(mid) < h ? lo : hi) = mid;
      }
      iv.lo = 0.5 * (lo + hi);
    } else {
      iv.lo = 0.0;
    }
    if (k < trials) {
      double lo = mode, hi = std::min(1.0, mode + 40 * sd);
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (pdf(mid) < h ? hi : lo) = mid;
      }
      iv.hi = 0.5 * (lo + hi);
    } else {
      iv.hi = 1.0;
    }
    return iv;
  };
  double h_lo = 0.0, h_hi = peak;
  for (int i = 0; i < 60; ++i) {
    const double h = 0.5 * (h_lo + h_hi);
    const Interval iv = level_edges(h);
    (integrate(iv.lo, iv.hi) > mass ? h_lo : h_hi) = h;
  }
  return level_edges(0.5 * (h_lo + h_hi));
}

}  // namespace qng::oracle

#endif  // QNG_TESTS_ORACLES_H
