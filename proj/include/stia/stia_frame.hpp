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

#ifndef STIA_STIA_FRAME_HPP
#define STIA_STIA_FRAME_HPP

#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "stia/channel.hpp"
#include "stia/rng.hpp"

namespace stia {

/// Corner-point space-time interference alignment schemes.
///
/// point_c: one unprecoded slot carrying every user's symbols, then K-1
///   aligned slots (T = K, needs omega >= (K-1)/K).
/// point_b: K unprecoded slots, slot k carrying user k's symbols only, then
///   K-2 aligned slots (T = 2K-2, needs omega >= (K-2)/(2K-2)).
enum class StiaScheme { point_b, point_c };

/// How phase-two precoders are computed from H_k^c[n] V = H_k^c[r].
enum class PrecoderRule {
  aligned,        // exact inverse, needs N_t = K-1
  least_squares,  // Frobenius-norm minimizer, any N_t <= K-1
};

std::string_view to_string(StiaScheme scheme);

/// Inversions with condition number above this are rejected as IllConditioned.
inline constexpr double kMaxConditionNumber = 1e8;

/// V with H_k^c[slot] V = H_k^c[ref_slot]. `user` is 0-based, slots 1-based.
/// Throws InvalidArgument unless N_t = K-1, IllConditioned above the threshold.
Eigen::MatrixXcd aligned_precoder(const ChannelTensor& channel, int user, int slot, int ref_slot);

/// Least-squares alignment: argmin_V ||H_k^c[ref_slot] - H_k^c[slot] V||_F.
/// Throws RankDeficient when H_k^c[slot] lacks full column rank.
Eigen::MatrixXcd ls_precoder(const ChannelTensor& channel, int user, int slot, int ref_slot);

/// Precoders and power scaling of one STIA frame.
struct PrecoderSet {
  StiaScheme scheme = StiaScheme::point_c;
  PrecoderRule rule = PrecoderRule::aligned;
  int num_users = 0;
  int num_tx_antennas = 0;
  int frame_len = 0;
  std::vector<int> phase1_slots;
  std::vector<int> phase2_slots;
  /// Phase-one slot whose interference pattern user k's symbols reproduce.
  std::vector<int> ref_slots;
  /// precoders[i][k]: V^(k)[phase2_slots[i]].
  std::vector<std::vector<Eigen::MatrixXcd>> precoders;
  /// Common phase-two amplitude scale.
  double beta = 1.0;
  /// Power per symbol, P / (K N_t).
  double symbol_power = 0.0;

  const Eigen::MatrixXcd& precoder(int user, int slot) const;
  bool is_phase2(int slot) const;

  /// Linear map from user `source`'s symbols to the transmit vector in
  /// `slot`, excluding the sqrt(symbol_power) factor. Zero when the slot does
  /// not carry that user's symbols.
  Eigen::MatrixXcd slot_map(int source, int slot) const;

  int symbols_per_user() const { return num_tx_antennas; }
  int symbols_delivered() const { return num_users * num_tx_antennas; }
  /// Interference-free equations each user builds (K-1).
  int equations_per_user() const { return num_users - 1; }
};

/// Builds a frame over slots 1..T of `channel` with total power budget P.
PrecoderSet build_frame(StiaScheme scheme, const ChannelTensor& channel, double total_power,
                        PrecoderRule rule = PrecoderRule::aligned);

/// Receiver-side linear combining of the T raw observations of one user.
struct CombiningPlan {
  int user = 0;
  /// (K-1) x T; row i is one interference-free equation.
  Eigen::MatrixXcd combiner;
  /// combiner * combiner^*, the covariance of the combined unit noise.
  Eigen::MatrixXcd noise_cov;
};

CombiningPlan combining_plan(StiaScheme scheme, int num_users, double beta, int user);
std::vector<CombiningPlan> combining_plans(StiaScheme scheme, int num_users, double beta);

/// Observations y^(k)[n]: row k, column n-1.
using Observations = Eigen::MatrixXcd;

/// Noiseless reception of one frame. symbols[k] holds user k's N_t symbols
/// at unit average power; the frame applies sqrt(p_s) and beta.
Observations transmit(const ChannelTensor& channel, const PrecoderSet& frame,
                      const std::vector<Eigen::VectorXcd>& symbols);

/// Same, plus CN(0,1) receiver noise drawn from `noise`.
Observations transmit(const ChannelTensor& channel, const PrecoderSet& frame,
                      const std::vector<Eigen::VectorXcd>& symbols, Rng& noise);

/// Matrix from a user's symbols to its combined observations, up to sqrt(p_s).
struct EffectiveChannel {
  int user = 0;
  Eigen::MatrixXcd matrix;
};

EffectiveChannel effective_channel(const ChannelTensor& channel, const PrecoderSet& frame,
                                   int user);

/// combiner * (map from user `source`'s symbols to user `observer`'s raw
/// observations). For source == observer this is the effective channel; for
/// other sources it is the residual interference, zero under exact alignment.
Eigen::MatrixXcd combined_map(const ChannelTensor& channel, const PrecoderSet& frame,
                              const CombiningPlan& plan, int source);

/// Zero-forcing estimate of user plan.user's symbols:
/// H_eff^-1 (C y) / sqrt(p_s). `user_observations` is that user's row of y.
/// Throws SingularMatrix if the effective channel lost rank.
Eigen::VectorXcd decode(const Eigen::VectorXcd& user_observations, const CombiningPlan& plan,
                        const EffectiveChannel& eff, double symbol_power);

/// Sum over the other users' symbols' contribution a receiver already knows
/// from prior-slot CSI: sum_{j != k} h^(k)T[ref_slot(j)]. For point_c this is
/// (K-1) h^(k)T[1].
Eigen::RowVectorXcd pilot_interference_row(const ChannelTensor& channel,
                                           const PrecoderSet& frame, int user);

/// Received pilots of user `user` in phase-two `slot`, one per subcarrier.
/// Row j of `pilots` is t_j^T; the channel is flat across subcarriers and the
/// pilots are precoded by sum_i V^(i)[slot] like the data.
Eigen::VectorXcd pilot_observations(const ChannelTensor& channel, const PrecoderSet& frame,
                                    int user, int slot, const Eigen::MatrixXcd& pilots);

/// Recovers the effective channel row h^(k)T[n] V^(k)[n] from B_t pilot
/// observations after removing the known interference term. Least squares
/// when B_t > N_t. Throws RankDeficient when the pilots do not span C^N_t.
Eigen::RowVectorXcd estimate_effective_channel_pilot(const Eigen::MatrixXcd& pilots,
                                                     const Eigen::RowVectorXcd& known_interference,
                                                     const Eigen::VectorXcd& observations);

/// Debug dump: {"scheme", "T", "beta", "symbol_power", "entries": [{"slot",
/// "user", "V": [[re, im], ...] row-major}]}.
void write_frame_json(std::ostream& out, const PrecoderSet& frame);

}  // namespace stia

#endif  // STIA_STIA_FRAME_HPP
