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

#ifndef STIA_MONTECARLO_HPP
#define STIA_MONTECARLO_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "stia/feedback.hpp"
#include "stia/rate.hpp"
#include "stia/stia_frame.hpp"

namespace stia {

enum class Scheme { tdma, zf, mat2, point_b, point_c, ls, timeshare };

std::string_view to_string(Scheme scheme);
/// CLI spellings: tdma, zf, mat2, pointB, pointC, ls, timeshare.
Scheme parse_scheme(std::string_view name);

struct SchemeConfig {
  Scheme scheme = Scheme::point_c;
  int num_users = 3;
  /// 0 means K-1. Only `ls` accepts fewer antennas.
  int num_tx_antennas = 0;
  /// STIA set count n for `timeshare`.
  int timeshare_sets = 20;
  /// When set, the scheme's CSI needs are checked against this model.
  std::optional<FeedbackModel> feedback;
  double h_min = 1e-3;
  double h_max = 1e3;

  int antennas() const { return num_tx_antennas > 0 ? num_tx_antennas : num_users - 1; }
};

/// Slots one trial of the scheme spans.
int trial_slots(const SchemeConfig& config);

/// Throws CsitError if the configured feedback model cannot support the
/// scheme, InvalidArgument on bad parameters. Under Model 1 the feedback
/// fraction must reach the scheme's operating point (point C and ls
/// (K-1)/K, point B (K-2)/(2K-2), ZF 1) and some placement of one frame
/// within a feedback cycle must find every CSI it uses. Model 2 fading is
/// block fading, which the STIA frames cannot use; timeshare needs exactly
/// T_fb = 1, T_c = K.
void check_feasible(const SchemeConfig& config);

/// Channel realizations redrawn per trial before giving up.
inline constexpr int kMaxResamples = 100;

struct TrialResult {
  /// Bits per slot.
  double sum_rate = 0.0;
  /// Channel redraws caused by ill-conditioned or singular matrices.
  int resamples = 0;
};

/// One channel draw, one frame, its achievable sum rate with Gaussian inputs
/// and unit noise (P = snr_linear). Deterministic in trial_key.
TrialResult run_trial(const SchemeConfig& config, double snr_linear, std::uint64_t trial_key);

/// Per-user post-combining links of an STIA frame, residual interference
/// folded into the noise covariance.
std::vector<UserLink> stia_links(const ChannelTensor& channel, const PrecoderSet& frame);

struct DofEstimate {
  Scheme scheme = Scheme::point_c;
  int num_users = 3;
  std::vector<double> snr_grid_db;
  std::vector<double> mean_sum_rate;
  /// Least-squares fit of mean_sum_rate against log2(SNR).
  double slope = 0.0;
  double intercept = 0.0;
  /// Largest deviation of a grid point from the fitted line.
  double fit_residual = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::int64_t resamples = 0;
};

/// Averages `trials` independent trials per SNR point (dB, within [30, 100],
/// strictly increasing, at least 3 points; trials >= 100) and fits the slope.
/// Trial t draws its channel from the stream keyed by (seed, scheme, t) at
/// every SNR point, and the per-point mean is a fixed-order pairwise sum, so
/// the result does not depend on `workers` (0 = hardware concurrency).
DofEstimate estimate_dof(const SchemeConfig& config, std::span<const double> snr_grid_db,
                         int trials, std::uint64_t seed, int workers = 0);

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> values);

/// `scheme,K,snr_db,mean_rate,trials,seed` rows.
void write_results_csv(std::ostream& out, const DofEstimate& estimate);
/// Every DofEstimate field; a non-empty `generated` adds that key first.
void write_estimate_json(std::ostream& out, const DofEstimate& estimate,
                         std::string_view generated = {});

}  // namespace stia

#endif  // STIA_MONTECARLO_HPP
