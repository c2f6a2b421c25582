// SPDX-License-Identifier: Apache-2.0
//
// stia-sim: space-time interference alignment simulator for the MISO
// broadcast channel with periodic CSI feedback.
// Copyright (C) 2026 The stia-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef STIA_ERRORS_HPP
#define STIA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stia {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling exceeded its retry cap.
class SamplingError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be inverted has condition number above the threshold.
/// Generic channels never trigger this; callers resample the trial.
class IllConditioned : public Error {
 public:
  IllConditioned(const std::string& what, double cond)
      : Error(what), condition_number(cond) {}
  double condition_number;
};

/// A least-squares system or pilot matrix does not have full column rank.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// An effective channel or covariance cannot be inverted / factored.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// A covariance matrix that must be positive definite is not.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// A feedback model is paired with an incompatible fading model, or a scheme
/// needs CSI the transmitter does not have.
class CsitError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside a curve's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace stia

#endif  // STIA_ERRORS_HPP
