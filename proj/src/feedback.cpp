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

#include "stia/feedback.hpp"

#include <type_traits>

#include "stia/errors.hpp"

namespace stia {

void FeedbackModel1::validate() const {
  if (non_feedback_slots < 0 || feedback_slots < 0 || cycle_length() < 1)
    throw InvalidArgument("FeedbackModel1: need T_n >= 0, T_f >= 0, T_n + T_f >= 1");
}

void FeedbackModel2::validate() const {
  if (delay_slots < 0 || coherence_slots < 1)
    throw InvalidArgument("FeedbackModel2: need T_fb >= 0 and T_c >= 1");
}

Rational normalized_parameter(const FeedbackModel& model) {
  return std::visit(
      [](const auto& m) -> Rational {
        m.validate();
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, FeedbackModel1>)
          return Rational(m.feedback_slots, m.cycle_length());
        else
          return Rational(m.delay_slots, m.coherence_slots);
      },
      model);
}

bool CsitView::knows_all(int num_users, int slot) const {
  for (int u = 0; u < num_users; ++u)
    if (!knows(u, slot)) return false;
  return true;
}

namespace {

CsitView view_model1(const FeedbackModel1& m, const FadingSpec& spec, int tx_slot,
                     int cycle_origin) {
  if (spec.model.kind != FadingModel::Kind::iid_fast)
    throw CsitError("csit_available: Model 1 is defined over fast fading");
  if (cycle_origin < 1 || tx_slot < cycle_origin)
    throw InvalidArgument("csit_available: tx_slot precedes the first feedback cycle");

  CsitView view;
  view.tx_slot = tx_slot;
  view.has_current.assign(spec.num_users, false);

  const int position = (tx_slot - cycle_origin) % m.cycle_length() + 1;
  const int cycle_start = tx_slot - position + 1;
  // Completed cycles were fully reported (outdated part at T_n + 1), unless
  // the cycle has no feedback slots at all.
  const int known_until = m.feedback_slots == 0                  ? cycle_origin - 1
                          : position <= m.non_feedback_slots ? cycle_start - 1
                                                                 : tx_slot;
  for (int u = 0; u < spec.num_users; ++u) {
    for (int s = cycle_origin; s <= known_until; ++s) view.known.emplace(u, s);
    view.has_current[u] = known_until == tx_slot;
  }
  return view;
}

CsitView view_model2(const FeedbackModel2& m, const FadingSpec& spec, int tx_slot) {
  if (spec.model.kind != FadingModel::Kind::block ||
      spec.model.coherence_slots != m.coherence_slots)
    throw CsitError("csit_available: Model 2 needs block fading with the model's T_c");

  CsitView view;
  view.tx_slot = tx_slot;
  view.has_current.assign(spec.num_users, false);

  // Feedback leaves at the first slot of every block and arrives T_fb later;
  // from then on every elapsed slot of that block is known.
  for (int s = 1; s <= tx_slot; ++s) {
    const int first = (coherence_block(spec, s) - 1) * m.coherence_slots + 1;
    if (first + m.delay_slots > tx_slot) continue;
    for (int u = 0; u < spec.num_users; ++u) view.known.emplace(u, s);
  }
  for (int u = 0; u < spec.num_users; ++u) view.has_current[u] = view.knows(u, tx_slot);
  return view;
}

}  // namespace

CsitView csit_available(const FeedbackModel& model, const FadingSpec& spec, int tx_slot,
                        int cycle_origin) {
  spec.validate();
  if (tx_slot < 1) throw InvalidArgument("csit_available: slots are 1-based");
  return std::visit(
      [&](const auto& m) {
        m.validate();
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, FeedbackModel1>)
          return view_model1(m, spec, tx_slot, cycle_origin);
        else
          return view_model2(m, spec, tx_slot);
      },
      model);
}

}  // namespace stia
