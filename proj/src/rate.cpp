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

#include "stia/rate.hpp"

#include <cmath>
#include <numbers>

#include "stia/errors.hpp"

namespace stia {

double link_bits(const UserLink& link, double symbol_power) {
  const auto& r = link.noise_cov;
  if (r.rows() != r.cols() || r.rows() != link.channel.rows())
    throw InvalidArgument("link_bits: covariance and channel dimensions differ");
  if (!r.isApprox(r.adjoint(), 1e-10))
    throw NotPositiveDefinite("link_bits: noise covariance is not Hermitian");
  if (symbol_power < 0.0) throw InvalidArgument("link_bits: negative power");

  Eigen::LLT<Eigen::MatrixXcd> chol(r);
  if (chol.info() != Eigen::Success)
    throw NotPositiveDefinite("link_bits: noise covariance is not positive definite");

  // Whitened channel L^-1 H, then log det(I + p_s G^* G) via Cholesky.
  const Eigen::MatrixXcd g = chol.matrixL().solve(link.channel);
  const Eigen::Index n = g.cols();
  const Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Identity(n, n) + symbol_power * (g.adjoint() * g);
  Eigen::LLT<Eigen::MatrixXcd> mchol(m);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_det += 2.0 * std::log(mchol.matrixLLT()(i, i).real());
  return log_det / std::numbers::ln2;
}

double sum_rate(std::span<const UserLink> links, double symbol_power, int frame_len) {
  if (frame_len < 1) throw InvalidArgument("sum_rate: frame length must be positive");
  double bits = 0.0;
  for (const auto& link : links) bits += link_bits(link, symbol_power);
  return bits / frame_len;
}

}  // namespace stia
