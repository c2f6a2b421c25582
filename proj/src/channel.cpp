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

#include "stia/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "stia/errors.hpp"
#include "stia/rng.hpp"

namespace stia {

FadingSpec FadingSpec::standard(int num_users, FadingModel model, std::uint64_t seed) {
  FadingSpec spec;
  spec.num_users = num_users;
  spec.num_tx_antennas = num_users - 1;
  spec.model = model;
  spec.seed = seed;
  spec.validate();
  return spec;
}

void FadingSpec::validate() const {
  if (num_users < 3) throw InvalidArgument("FadingSpec: need at least 3 users");
  if (num_tx_antennas < 1) throw InvalidArgument("FadingSpec: need at least 1 transmit antenna");
  if (!(h_min > 0.0) || !(h_max > h_min) || !std::isfinite(h_max))
    throw InvalidArgument("FadingSpec: magnitude bounds must satisfy 0 < h_min < h_max < inf");
  if (model.kind == FadingModel::Kind::block && model.coherence_slots < 1)
    throw InvalidArgument("FadingSpec: coherence time must be at least one slot");
}

ChannelTensor::ChannelTensor(FadingSpec spec, int num_slots)
    : spec_(spec), num_slots_(num_slots) {
  if (num_slots < 1) throw InvalidArgument("ChannelTensor: need at least one slot");
  gains_.assign(static_cast<std::size_t>(num_slots) * spec_.num_users * spec_.num_tx_antennas,
                cd{});
}

std::size_t ChannelTensor::index(int slot, int user, int antenna) const {
  if (slot < 1 || slot > num_slots_ || user < 0 || user >= spec_.num_users || antenna < 0 ||
      antenna >= spec_.num_tx_antennas)
    throw InvalidArgument("ChannelTensor: index out of range");
  return (static_cast<std::size_t>(slot - 1) * spec_.num_users + user) * spec_.num_tx_antennas +
         antenna;
}

cd& ChannelTensor::gain(int slot, int user, int antenna) {
  return gains_[index(slot, user, antenna)];
}

cd ChannelTensor::gain(int slot, int user, int antenna) const {
  return gains_[index(slot, user, antenna)];
}

Eigen::RowVectorXcd ChannelTensor::row(int slot, int user) const {
  Eigen::RowVectorXcd h(spec_.num_tx_antennas);
  for (int m = 0; m < spec_.num_tx_antennas; ++m) h(m) = gain(slot, user, m);
  return h;
}

Eigen::MatrixXcd ChannelTensor::stacked_except(int slot, int excluded_user) const {
  Eigen::MatrixXcd out(spec_.num_users - 1, spec_.num_tx_antennas);
  int r = 0;
  for (int u = 0; u < spec_.num_users; ++u) {
    if (u == excluded_user) continue;
    out.row(r++) = row(slot, u);
  }
  return out;
}

Eigen::MatrixXcd ChannelTensor::stacked(int slot, std::span<const int> users) const {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(users.size()), spec_.num_tx_antennas);
  for (std::size_t i = 0; i < users.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = row(slot, users[i]);
  return out;
}

ChannelTensor ChannelTensor::gather(std::span<const int> slots) const {
  FadingSpec spec = spec_;
  spec.model = FadingModel::iid_fast();
  ChannelTensor out(spec, static_cast<int>(slots.size()));
  for (std::size_t i = 0; i < slots.size(); ++i)
    for (int u = 0; u < spec_.num_users; ++u)
      for (int m = 0; m < spec_.num_tx_antennas; ++m)
        out.gain(static_cast<int>(i) + 1, u, m) = gain(slots[i], u, m);
  return out;
}

namespace {

cd bounded_gain(Rng& rng, double h_min, double h_max) {
  for (int attempt = 0; attempt < kMaxMagnitudeRetries; ++attempt) {
    const cd h = rng.complex_normal();
    const double mag = std::abs(h);
    if (mag >= h_min && mag <= h_max) return h;
  }
  throw SamplingError("sample_channel: magnitude bounds rejected every draw");
}

}  // namespace

ChannelTensor sample_channel(const FadingSpec& spec, int num_slots, std::uint64_t stream) {
  spec.validate();
  ChannelTensor channel(spec, num_slots);
  Rng rng(stream_key({spec.seed, stream}));

  const int block_len =
      spec.model.kind == FadingModel::Kind::block ? spec.model.coherence_slots : 1;
  for (int first = 1; first <= num_slots; first += block_len) {
    const int last = std::min(num_slots, first + block_len - 1);
    for (int u = 0; u < spec.num_users; ++u) {
      for (int m = 0; m < spec.num_tx_antennas; ++m) {
        const cd h = bounded_gain(rng, spec.h_min, spec.h_max);
        for (int n = first; n <= last; ++n) channel.gain(n, u, m) = h;
      }
    }
  }
  return channel;
}

int coherence_block(const FadingSpec& spec, int slot) {
  if (slot < 1) throw InvalidArgument("coherence_block: slots are 1-based");
  if (spec.model.kind == FadingModel::Kind::iid_fast) return slot;
  const int tc = spec.model.coherence_slots;
  return (slot + tc - 1) / tc;
}

void write_channel_csv(std::ostream& out, const ChannelTensor& channel) {
  out << "slot,user,antenna,re,im\n";
  char buf[96];
  for (int n = 1; n <= channel.num_slots(); ++n)
    for (int u = 0; u < channel.num_users(); ++u)
      for (int m = 0; m < channel.num_tx_antennas(); ++m) {
        const cd h = channel.gain(n, u, m);
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g\n", n, u, m, h.real(), h.imag());
        out << buf;
      }
}

}  // namespace stia
