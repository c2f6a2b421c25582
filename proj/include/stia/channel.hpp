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

#ifndef STIA_CHANNEL_HPP
#define STIA_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace stia {

using cd = std::complex<double>;

/// Time variation of the fading process.
struct FadingModel {
  enum class Kind { iid_fast, block };

  Kind kind = Kind::iid_fast;
  /// Coherence time in slots; 1 for fast fading.
  int coherence_slots = 1;

  static FadingModel iid_fast() { return {Kind::iid_fast, 1}; }
  static FadingModel block(int coherence_slots) { return {Kind::block, coherence_slots}; }

  bool operator==(const FadingModel&) const = default;
};

/// Parameters of a K-user MISO broadcast channel realization.
struct FadingSpec {
  int num_users = 3;
  int num_tx_antennas = 2;
  FadingModel model = FadingModel::iid_fast();
  /// Every channel coefficient magnitude lies in [h_min, h_max].
  double h_min = 1e-3;
  double h_max = 1e3;
  std::uint64_t seed = 0;

  /// K users, K-1 transmit antennas.
  static FadingSpec standard(int num_users, FadingModel model, std::uint64_t seed);

  /// Throws InvalidArgument if any invariant is violated.
  void validate() const;
};

/// Channel gains h^(k)_m[n] for slots 1..num_slots.
///
/// Slots are 1-based, users and antennas 0-based. The tensor is the single
/// source of channel truth for a trial; CSIT views only select from it.
class ChannelTensor {
 public:
  ChannelTensor(FadingSpec spec, int num_slots);

  const FadingSpec& spec() const { return spec_; }
  int num_slots() const { return num_slots_; }
  int num_users() const { return spec_.num_users; }
  int num_tx_antennas() const { return spec_.num_tx_antennas; }

  cd& gain(int slot, int user, int antenna);
  cd gain(int slot, int user, int antenna) const;

  /// h^(k)T[n] as a 1 x N_t row.
  Eigen::RowVectorXcd row(int slot, int user) const;

  /// Rows of every user except `excluded_user` at `slot`, in increasing user
  /// order: the (K-1) x N_t matrix H_k^c[n].
  Eigen::MatrixXcd stacked_except(int slot, int excluded_user) const;

  /// All K rows at `slot` for the listed users, in the given order.
  Eigen::MatrixXcd stacked(int slot, std::span<const int> users) const;

  /// New tensor whose slot i (1-based) is this tensor's slot slots[i-1].
  /// The result is tagged iid_fast: callers gather slots from distinct
  /// coherence blocks.
  ChannelTensor gather(std::span<const int> slots) const;

 private:
  std::size_t index(int slot, int user, int antenna) const;

  FadingSpec spec_;
  int num_slots_;
  std::vector<cd> gains_;
};

/// Retry cap for the per-scalar magnitude rejection loop.
inline constexpr int kMaxMagnitudeRetries = 1000;

/// Draws a channel realization. Each coefficient is CN(0,1), redrawn until its
/// magnitude lies in the spec bounds. Block fading draws one value per
/// coherence block and repeats it. Deterministic in (spec.seed, stream).
ChannelTensor sample_channel(const FadingSpec& spec, int num_slots, std::uint64_t stream);

/// Coherence block (1-based) holding `slot`: ceil(slot / T_c) for block
/// fading, the slot itself for fast fading.
int coherence_block(const FadingSpec& spec, int slot);

/// Writes `slot,user,antenna,re,im` rows, one per coefficient.
void write_channel_csv(std::ostream& out, const ChannelTensor& channel);

}  // namespace stia

#endif  // STIA_CHANNEL_HPP
