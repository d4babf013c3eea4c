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
#ifndef QNG_NUMERIC_H
#define QNG_NUMERIC_H

#include <cmath>
#include <span>

#include <quadmath.h>

namespace qng {

using quad = __float128;

// Overloads so that templated kernels can run in double, long double or
// binary128 without caring which one they got.
namespace fp {
inline double exp(double x) { return std::exp(x); }
inline long double exp(long double x) { return std::exp(x); }
inline quad exp(quad x) { return expq(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline long double sqrt(long double x) { return std::sqrt(x); }
inline quad sqrt(quad x) { return sqrtq(x); }
inline double cos(double x) { return std::cos(x); }
inline long double cos(long double x) { return std::cos(x); }
inline quad cos(quad x) { return cosq(x); }
inline double sin(double x) { return std::sin(x); }
inline long double sin(long double x) { return std::sin(x); }
inline quad sin(quad x) { return sinq(x); }
}  // namespace fp

/// Neumaier-compensated accumulator.
template <typename T = double>
class CompensatedSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if (abs_(sum_) >= abs_(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  static T abs_(T x) { return x < 0 ? -x : x; }
  T sum_ = 0;
  T comp_ = 0;
};

inline double compensated_sum(std::span<const double> xs) {
  CompensatedSum<double> s;
  for (double x : xs) s.add(x);
  return s.value();
}

/// Binomial coefficient as a double; exact for the small arguments used here.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

}  // namespace qng

#endif  // QNG_NUMERIC_H
