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
#ifndef QNG_HERMITE_H
#define QNG_HERMITE_H

namespace qng {

/// Physicists' Hermite polynomial as log-magnitude and sign (sign 0 iff the
/// value is exactly zero, in which case log_magnitude is -inf).
struct HermiteValue {
  double log_magnitude = 0.0;
  int sign = 1;

  double value() const;
};

HermiteValue hermite_eval(int n, double x);

/// The non-negative root x of H_{n+1} at which |H_n(x)| is largest.
struct HermiteAnchor {
  int order = 0;
  double x_star = 0.0;
  double h_n_sq = 1.0;
};

HermiteAnchor hermite_anchor(int n);

}  // namespace qng

#endif  // QNG_HERMITE_H
