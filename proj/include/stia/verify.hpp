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

#ifndef STIA_VERIFY_HPP
#define STIA_VERIFY_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "stia/channel.hpp"
#include "stia/stia_frame.hpp"

namespace stia {

/// max over users k and phase-two slots n of
/// ||H_k^c[n] V^(k)[n] - H_k^c[r_k]||_F / ||H_k^c[r_k]||_F.
double max_alignment_residual(const ChannelTensor& channel, const PrecoderSet& frame);

/// Noiseless transmit of random symbols, combine and decode every user;
/// largest |s_hat - s| relative to the largest |s|.
double max_decode_error(const ChannelTensor& channel, const PrecoderSet& frame, Rng& symbols);

/// Largest residual-interference entry after combining, relative to the
/// largest effective-channel entry.
double max_leakage(const ChannelTensor& channel, const PrecoderSet& frame);

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  /// Largest K covered by the alignment and decode suites (from 3).
  int max_users = 5;
  /// Channel draws per (K, scheme).
  int seeds = 20;
  std::uint64_t seed = 1;
  /// Partition printed by the partition suite.
  int partition_users = 3;
  int partition_sets = 3;
};

/// Suite names accepted by run_verify_suite.
const std::vector<std::string_view>& verify_suites();

/// Runs one suite ("alignment", "partition", "decode", "regions") or "all".
/// Informational output (the partition listing) goes to `log`.
/// Throws InvalidArgument on an unknown suite name.
std::vector<CheckResult> run_verify_suite(std::string_view suite, const VerifyOptions& options,
                                          std::ostream& log);

/// Fixed-width PASS/FAIL table, one row per check.
void print_check_table(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace stia

#endif  // STIA_VERIFY_HPP
