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

#ifndef STIA_FEEDBACK_HPP
#define STIA_FEEDBACK_HPP

#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "stia/channel.hpp"
#include "stia/rational.hpp"

namespace stia {

/// Feedback-frequency-limited model over fast fading. Each cycle of
/// T = T_n + T_f slots starts with T_n slots without feedback; the first
/// feedback slot delivers the outdated CSI of the cycle plus current CSI, and
/// every later feedback slot delivers current CSI.
struct FeedbackModel1 {
  int non_feedback_slots = 1;  // T_n
  int feedback_slots = 2;      // T_f

  int cycle_length() const { return non_feedback_slots + feedback_slots; }
  void validate() const;
};

/// Feedback-delay-limited model over block fading. CSI sent at the first slot
/// of a coherence block reaches the transmitter T_fb slots later.
struct FeedbackModel2 {
  int delay_slots = 1;      // T_fb
  int coherence_slots = 3;  // T_c

  void validate() const;
};

using FeedbackModel = std::variant<FeedbackModel1, FeedbackModel2>;

/// omega = T_f / (T_n + T_f) for Model 1, gamma = T_fb / T_c for Model 2.
Rational normalized_parameter(const FeedbackModel& model);

/// Channel knowledge at the transmitter when it transmits in `tx_slot`.
struct CsitView {
  int tx_slot = 1;
  /// (user, slot) pairs whose channel vector is known.
  std::set<std::pair<int, int>> known;
  /// has_current[u] iff (u, tx_slot) is known.
  std::vector<bool> has_current;

  bool knows(int user, int slot) const { return known.contains({user, slot}); }
  /// True when every user's channel at `slot` is known.
  bool knows_all(int num_users, int slot) const;
};

/// Which CSI the transmitter holds at `tx_slot`.
///
/// Model 1 needs a fast-fading channel. Cycles start at `cycle_origin`; the
/// view holds every slot of completed cycles plus, from the first feedback
/// slot on, the current cycle up to `tx_slot`. Model 2 needs
/// block fading with the model's coherence time. Throws CsitError on a
/// mismatched pairing.
CsitView csit_available(const FeedbackModel& model, const FadingSpec& spec, int tx_slot,
                        int cycle_origin = 1);

}  // namespace stia

#endif  // STIA_FEEDBACK_HPP
