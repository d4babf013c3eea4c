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
#ifndef QNG_ERRORS_H
#define QNG_ERRORS_H

#include <stdexcept>
#include <string>

namespace qng {

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Requested parameter combination has no supported formula.
struct UnsupportedError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Truncation or cancellation would exceed the configured tolerance.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Root bracketing or curve construction failed.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Query lies above the validity range of a threshold curve.
struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// Malformed input document or inconsistent counts.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace qng

#endif  // QNG_ERRORS_H
