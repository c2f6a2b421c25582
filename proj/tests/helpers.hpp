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

#ifndef STIA_TESTS_HELPERS_HPP
#define STIA_TESTS_HELPERS_HPP

#include <cstdint>
#include <optional>

#include "stia/channel.hpp"
#include "stia/errors.hpp"
#include "stia/stia_frame.hpp"

namespace stia::testing {

inline int frame_slots(StiaScheme s, int k) { return s == StiaScheme::point_c ? k : 2 * k - 2; }

struct Drawn {
  ChannelTensor channel;
  PrecoderSet frame;
};

/// Fast-fading channel plus frame, redrawing on the rare ill-conditioned draw.
inline Drawn draw_frame(StiaScheme scheme, int k, std::uint64_t seed, double power = 1e4,
                        PrecoderRule rule = PrecoderRule::aligned, int antennas = 0) {
  auto spec = FadingSpec::standard(k, FadingModel::iid_fast(), seed);
  if (antennas > 0) spec.num_tx_antennas = antennas;
  for (std::uint64_t stream = 0;; ++stream) {
    auto ch = sample_channel(spec, frame_slots(scheme, k), stream);
    try {
      auto frame = build_frame(scheme, ch, power, rule);
      return {std::move(ch), std::move(frame)};
    } catch (const IllConditioned&) {
      if (stream > 50) throw;
    }
  }
}

inline Eigen::VectorXcd random_vector(Rng& rng, int n) {
  Eigen::VectorXcd v(n);
  for (auto& x : v) x = rng.complex_normal();
  return v;
}

inline Eigen::MatrixXcd random_matrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.complex_normal();
  return m;
}

}  // namespace stia::testing

#endif  // STIA_TESTS_HELPERS_HPP
