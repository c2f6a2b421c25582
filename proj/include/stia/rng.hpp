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

#ifndef STIA_RNG_HPP
#define STIA_RNG_HPP

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace stia {

/// SplitMix64 finalizer; used to turn structured stream keys into seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds a list of identifiers (seed, scheme, snr index, trial, ...) into one
/// 64-bit stream key. Order matters.
constexpr std::uint64_t stream_key(std::initializer_list<std::uint64_t> ids) noexcept {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (auto id : ids) h = mix64(h ^ mix64(id));
  return h;
}

/// Random stream owned by a single trial. Not shared between threads.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : engine_(mix64(key)) {}

  double normal() { return normal_(engine_); }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  /// Circularly-symmetric complex Gaussian, unit variance.
  std::complex<double> complex_normal() {
    constexpr double kHalf = 0.70710678118654752440;
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {kHalf * re, kHalf * im};
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace stia

#endif  // STIA_RNG_HPP
