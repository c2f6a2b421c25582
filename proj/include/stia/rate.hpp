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

#ifndef STIA_RATE_HPP
#define STIA_RATE_HPP

#include <span>

#include <Eigen/Dense>

namespace stia {

/// One user's post-combining link: combined = sqrt(p_s) channel s + noise,
/// noise ~ CN(0, noise_cov).
struct UserLink {
  Eigen::MatrixXcd channel;
  Eigen::MatrixXcd noise_cov;
};

/// log2 det(I + p_s H^* R^-1 H) in bits per frame.
/// Throws NotPositiveDefinite if R is not Hermitian positive definite.
double link_bits(const UserLink& link, double symbol_power);

/// sum_k (1/T) log2 det(I + p_s H_k^* R_k^-1 H_k), bits per slot.
double sum_rate(std::span<const UserLink> links, double symbol_power, int frame_len);

}  // namespace stia

#endif  // STIA_RATE_HPP
