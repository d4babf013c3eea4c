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

#include <boost/math/special_functions/hermite.hpp>
#include <gtest/gtest.h>

namespace qng {
namespace {

TEST(HermiteEval, LowOrders) {
  for (double x : {-2.3, -0.4, 0.0, 0.9, 3.7}) {
    EXPECT_DOUBLE_EQ(hermite_eval(0, x).value(), 1.0);
    EXPECT_NEAR(hermite_eval(2, x).value(), 4 * x * x - 2, 1e-12);
    EXPECT_NEAR(hermite_eval(3, x).value(), 8 * x * x * x - 12 * x, 1e-11);
  }
  EXPECT_NEAR(hermite_eval(2, 1 / std::sqrt(2.0)).value(), 0.0, 1e-14);
  EXPECT_NEAR(hermite_eval(3, std::sqrt(1.5)).value(), 0.0, 1e-13);
}

TEST(HermiteEval, MatchesBoost) {
  for (int n = 0; n <= 40; ++n) {
    for (double x : {-4.1, -1.3, 0.2, 0.75, 2.5, 6.0}) {
      const double ref = boost::math::hermite(n, x);
      const double got = hermite_eval(n, x).value();
      EXPECT_NEAR(got, ref, 1e-12 * std::max(1.0, std::abs(ref))) << n << " " << x;
    }
  }
}

TEST(HermiteEval, LargeOrderStaysFinite) {
  // Overflows double; the long double recurrence in Boost is the reference.
  for (double x : {-3.3, 7.0, 25.0, 60.0}) {
    const HermiteValue h = hermite_eval(300, x);
    ASSERT_TRUE(std::isfinite(h.log_magnitude));
    const long double ref = boost::math::hermite(300, static_cast<long double>(x));
    EXPECT_NEAR(h.log_magnitude, static_cast<double>(std::log(std::fabs(ref))), 1e-10) << x;
    EXPECT_EQ(h.sign, ref < 0 ? -1 : 1) << x;
  }
}

TEST(HermiteAnchor, Examples) {
  const HermiteAnchor a0 = hermite_anchor(0);
  EXPECT_EQ(a0.x_star, 0.0);
  EXPECT_EQ(a0.h_n_sq, 1.0);
  const HermiteAnchor a1 = hermite_anchor(1);
  EXPECT_NEAR(a1.x_star, 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(a1.h_n_sq, 2.0, 1e-11);
  const HermiteAnchor a2 = hermite_anchor(2);
  EXPECT_NEAR(a2.x_star, std::sqrt(1.5), 1e-12);
  EXPECT_NEAR(a2.h_n_sq, 16.0, 1e-10);
}

TEST(HermiteAnchor, RootOfNextOrderWithLargestValue) {
  for (int n = 1; n <= 20; ++n) {
    const HermiteAnchor a = hermite_anchor(n);
    EXPECT_GE(a.x_star, 0.0);
    const double scale = std::exp(hermite_eval(n + 1, a.x_star + 1e-3).log_magnitude);
    EXPECT_LT(std::abs(boost::math::hermite(n + 1, a.x_star)), 1e-12 * std::max(1.0, scale)) << n;
    // Independent scan of all non-negative roots of H_{n+1}.
    double best = 0.0;
    const double hi = std::sqrt(4.0 * (n + 1) + 2.0);
    double prev = boost::math::hermite(n + 1, 0.0);
    if (prev == 0.0) best = std::pow(boost::math::hermite(n, 0.0), 2);
    for (int i = 1; i <= 20000; ++i) {
      const double x = hi * i / 20000;
      const double cur = boost::math::hermite(n + 1, x);
      if (prev != 0.0 && (cur < 0) != (prev < 0)) {
        double lo = x - hi / 20000, up = x;
        for (int k = 0; k < 80; ++k) {
          const double mid = 0.5 * (lo + up);
          ((boost::math::hermite(n + 1, mid) < 0) == (prev < 0) ? lo : up) = mid;
        }
        best = std::max(best, std::pow(boost::math::hermite(n, 0.5 * (lo + up)), 2));
      }
      prev = cur;
    }
    EXPECT_NEAR(a.h_n_sq, best, 1e-9 * best) << n;
  }
}

}  // namespace
}  // namespace qng
