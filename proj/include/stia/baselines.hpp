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

#ifndef STIA_BASELINES_HPP
#define STIA_BASELINES_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stia/channel.hpp"
#include "stia/rational.hpp"
#include "stia/rng.hpp"
#include "stia/stia_frame.hpp"

namespace stia {

// ---------------------------------------------------------------------------
// Zero forcing with current CSIT

/// Users served by ZF in `slot`: everyone except user (slot mod K), 0-based.
std::vector<int> zf_served_users(int num_users, int slot);

/// Unit-norm columns w_i with h_j^T w_i = 0 for j != i, from the pseudo-inverse
/// of the stacked served rows. One row gives the matched-filter direction.
/// Throws IllConditioned above kMaxConditionNumber.
Eigen::MatrixXcd zf_beamformers(const Eigen::MatrixXcd& served_rows);

struct ZfResult {
  int slot = 0;
  std::vector<int> served;
  /// Column i beams to served[i].
  Eigen::MatrixXcd beamformers;
  double power_per_user = 0.0;
  /// log2(1 + power_per_user |h_i^T w_i|^2) per served user.
  std::vector<double> rates;
  double bits() const;
};

/// ZF spatial multiplexing to K-1 users in `slot`, total power P split
/// equally.
ZfResult zf_frame(const ChannelTensor& channel, int slot, double total_power);

// ---------------------------------------------------------------------------
// TDMA

struct TdmaResult {
  int slot = 0;
  int user = 0;
  Eigen::VectorXcd beamformer;
  double rate = 0.0;
};

/// One user per slot, round-robin ((slot-1) mod K). With CSIT the beam is
/// h^* / ||h||, otherwise antenna 0 alone.
TdmaResult tdma_frame(const ChannelTensor& channel, int slot, double total_power, bool use_csit);

// ---------------------------------------------------------------------------
// Two-user retrospective alignment with delayed CSIT over slots 1..3

struct Mat2Frame {
  int user_a = 0;
  int user_b = 1;
  /// Power per symbol in slots 1 and 2, P/2.
  double symbol_power = 0.0;
  /// Slot-3 amplitude scale; x[3] = alpha sqrt(p_s) u e_0.
  double alpha = 1.0;
  /// Index 0 for user_a, 1 for user_b.
  std::array<CombiningPlan, 2> plans;
  std::array<EffectiveChannel, 2> effective;
};

/// Slot 1 carries user A's two symbols, slot 2 user B's, slot 3 the scalar
/// h^(B)T[1] s^A + h^(A)T[2] s^B on antenna 0. Needs N_t >= 2.
/// Throws SingularMatrix when an effective 2x2 channel is singular.
Mat2Frame mat2_frame(const ChannelTensor& channel, int user_a, int user_b, double total_power);

/// Transmit vectors x[1..3] as the columns of an N_t x 3 matrix.
Eigen::MatrixXcd mat2_signals(const ChannelTensor& channel, const Mat2Frame& frame,
                              const Eigen::VectorXcd& symbols_a, const Eigen::VectorXcd& symbols_b);

/// Observations, row 0 for user A and row 1 for user B.
Observations mat2_transmit(const ChannelTensor& channel, const Mat2Frame& frame,
                           const Eigen::VectorXcd& symbols_a, const Eigen::VectorXcd& symbols_b);
Observations mat2_transmit(const ChannelTensor& channel, const Mat2Frame& frame,
                           const Eigen::VectorXcd& symbols_a, const Eigen::VectorXcd& symbols_b,
                           Rng& noise);

// ---------------------------------------------------------------------------
// Composite schedule at gamma = 1/K

/// Slot partition over n + K - 1 coherence blocks of K slots each.
struct IndexPartition {
  int num_users = 0;
  int n = 0;
  int total_slots = 0;
  /// I_1..I_n, each {k_1, ..., k_K} with k_1 the first slot of a block.
  std::vector<std::vector<int>> stia_sets;
  std::vector<int> zf_set;
  std::vector<int> tdma_set;

  /// "STIA:<l>" (1-based), "ZF" or "TDMA".
  std::string assignment(int slot) const;
  /// Throws InvalidArgument if the sets are not a valid partition.
  void validate() const;
};

/// Set I_l takes the first slot of block l and, for j = 1..K-1, slot j+1 of
/// block l+j. The leftovers are ZF (current CSI) and TDMA (delayed CSI only).
IndexPartition partition_slots(int num_users, int n);

/// `slot,assignment` rows.
void write_partition_csv(std::ostream& out, const IndexPartition& partition);

struct TimeshareResult {
  IndexPartition partition;
  std::int64_t symbols_delivered = 0;
  std::int64_t slots_used = 0;
  /// Total bits over the composite frame.
  double bits = 0.0;

  Rational symbols_per_slot() const { return Rational(symbols_delivered, slots_used); }
  double sum_rate() const { return bits / static_cast<double>(slots_used); }
};

/// Point-C STIA on each I_l, ZF on I_ZF, CSIT-free TDMA on I_TDMA. The channel
/// must be block fading with T_c = K and cover the whole partition; CSIT is
/// checked against feedback Model 2 with T_fb = 1. Throws CsitError if a
/// scheme would need CSI the transmitter lacks.
TimeshareResult timeshare_frame(int num_users, int n, const ChannelTensor& channel,
                                double total_power);

}  // namespace stia

#endif  // STIA_BASELINES_HPP
