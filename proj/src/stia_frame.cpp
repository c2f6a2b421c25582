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

#include "stia/stia_frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "stia/errors.hpp"

namespace stia {

std::string_view to_string(StiaScheme scheme) {
  return scheme == StiaScheme::point_b ? "pointB" : "pointC";
}

namespace {

double condition_number(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

int frame_length(StiaScheme scheme, int num_users) {
  return scheme == StiaScheme::point_c ? num_users : 2 * num_users - 2;
}

void check_user(int user, int num_users) {
  if (user < 0 || user >= num_users) throw InvalidArgument("user index out of range");
}

}  // namespace

Eigen::MatrixXcd aligned_precoder(const ChannelTensor& channel, int user, int slot,
                                  int ref_slot) {
  check_user(user, channel.num_users());
  if (channel.num_tx_antennas() != channel.num_users() - 1)
    throw InvalidArgument("aligned_precoder: exact alignment needs N_t = K-1");

  const Eigen::MatrixXcd current = channel.stacked_except(slot, user);
  const Eigen::MatrixXcd target = channel.stacked_except(ref_slot, user);
  const double cond = condition_number(current);
  if (cond > kMaxConditionNumber)
    throw IllConditioned("aligned_precoder: H_k^c[n] is ill-conditioned", cond);

  const auto lu = current.partialPivLu();
  Eigen::MatrixXcd v = lu.solve(target);
  v += lu.solve(target - current * v);  // one refinement step

  const double residual = (target - current * v).norm();
  if (residual > 1e-9 * target.norm())
    throw IllConditioned("aligned_precoder: alignment residual above tolerance", cond);
  return v;
}

Eigen::MatrixXcd ls_precoder(const ChannelTensor& channel, int user, int slot, int ref_slot) {
  check_user(user, channel.num_users());
  if (channel.num_tx_antennas() > channel.num_users() - 1)
    throw InvalidArgument("ls_precoder: needs N_t <= K-1");

  const Eigen::MatrixXcd current = channel.stacked_except(slot, user);
  const Eigen::MatrixXcd target = channel.stacked_except(ref_slot, user);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(current, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= 1e-12 * s(0))
    throw RankDeficient("ls_precoder: H_k^c[n] does not have full column rank");
  if (s(0) / s(s.size() - 1) > kMaxConditionNumber)
    throw IllConditioned("ls_precoder: H_k^c[n] is ill-conditioned", s(0) / s(s.size() - 1));
  // Same minimizer as the normal equations (H* H)^-1 H* B, without squaring
  // the condition number.
  return svd.solve(target);
}

const Eigen::MatrixXcd& PrecoderSet::precoder(int user, int slot) const {
  const auto it = std::find(phase2_slots.begin(), phase2_slots.end(), slot);
  if (it == phase2_slots.end()) throw InvalidArgument("precoder: slot is not in phase two");
  check_user(user, num_users);
  return precoders[static_cast<std::size_t>(it - phase2_slots.begin())][user];
}

bool PrecoderSet::is_phase2(int slot) const {
  return std::find(phase2_slots.begin(), phase2_slots.end(), slot) != phase2_slots.end();
}

Eigen::MatrixXcd PrecoderSet::slot_map(int source, int slot) const {
  check_user(source, num_users);
  if (slot < 1 || slot > frame_len) throw InvalidArgument("slot_map: slot outside frame");
  if (is_phase2(slot)) return beta * precoder(source, slot);
  if (scheme == StiaScheme::point_c || slot == source + 1)
    return Eigen::MatrixXcd::Identity(num_tx_antennas, num_tx_antennas);
  return Eigen::MatrixXcd::Zero(num_tx_antennas, num_tx_antennas);
}

PrecoderSet build_frame(StiaScheme scheme, const ChannelTensor& channel, double total_power,
                        PrecoderRule rule) {
  const int k_users = channel.num_users();
  const int nt = channel.num_tx_antennas();
  if (!(total_power > 0.0)) throw InvalidArgument("build_frame: power must be positive");

  PrecoderSet frame;
  frame.scheme = scheme;
  frame.rule = rule;
  frame.num_users = k_users;
  frame.num_tx_antennas = nt;
  frame.frame_len = frame_length(scheme, k_users);
  if (channel.num_slots() < frame.frame_len)
    throw InvalidArgument("build_frame: channel shorter than the frame");

  const int phase1_len = scheme == StiaScheme::point_c ? 1 : k_users;
  for (int n = 1; n <= frame.frame_len; ++n)
    (n <= phase1_len ? frame.phase1_slots : frame.phase2_slots).push_back(n);
  for (int k = 0; k < k_users; ++k)
    frame.ref_slots.push_back(scheme == StiaScheme::point_c ? 1 : k + 1);

  frame.symbol_power = total_power / (static_cast<double>(k_users) * nt);
  double peak = 0.0;
  for (int n : frame.phase2_slots) {
    auto& per_user = frame.precoders.emplace_back();
    double energy = 0.0;
    for (int k = 0; k < k_users; ++k) {
      per_user.push_back(rule == PrecoderRule::aligned
                             ? aligned_precoder(channel, k, n, frame.ref_slots[k])
                             : ls_precoder(channel, k, n, frame.ref_slots[k]));
      energy += per_user.back().squaredNorm();
    }
    peak = std::max(peak, frame.symbol_power * energy);
  }
  frame.beta = std::sqrt(total_power / peak);
  return frame;
}

CombiningPlan combining_plan(StiaScheme scheme, int num_users, double beta, int user) {
  check_user(user, num_users);
  if (!(beta > 0.0)) throw InvalidArgument("combining_plan: beta must be positive");
  const int frame_len = frame_length(scheme, num_users);

  CombiningPlan plan;
  plan.user = user;
  plan.combiner = Eigen::MatrixXcd::Zero(num_users - 1, frame_len);
  auto& c = plan.combiner;
  if (scheme == StiaScheme::point_c) {
    // y[n] - beta y[1], n = 2..K
    for (int i = 0; i < num_users - 1; ++i) {
      c(i, i + 1) = 1.0;
      c(i, 0) = -beta;
    }
  } else {
    // y[k] alone, then y[n] - beta sum_{j != k} y[j] for n = K+1..2K-2
    c(0, user) = 1.0;
    for (int i = 1; i < num_users - 1; ++i) {
      c(i, num_users + i - 1) = 1.0;
      for (int j = 0; j < num_users; ++j)
        if (j != user) c(i, j) = -beta;
    }
  }
  plan.noise_cov = c * c.adjoint();
  return plan;
}

std::vector<CombiningPlan> combining_plans(StiaScheme scheme, int num_users, double beta) {
  std::vector<CombiningPlan> plans;
  for (int k = 0; k < num_users; ++k) plans.push_back(combining_plan(scheme, num_users, beta, k));
  return plans;
}

Observations transmit(const ChannelTensor& channel, const PrecoderSet& frame,
                      const std::vector<Eigen::VectorXcd>& symbols) {
  const int k_users = frame.num_users;
  if (static_cast<int>(symbols.size()) != k_users)
    throw InvalidArgument("transmit: need one symbol vector per user");
  for (const auto& s : symbols)
    if (s.size() != frame.num_tx_antennas)
      throw InvalidArgument("transmit: symbol vectors must have N_t entries");

  const double amp = std::sqrt(frame.symbol_power);
  Observations y(k_users, frame.frame_len);
  for (int n = 1; n <= frame.frame_len; ++n) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(frame.num_tx_antennas);
    if (frame.is_phase2(n)) {
      for (int k = 0; k < k_users; ++k) x += frame.precoder(k, n) * symbols[k];
      x *= frame.beta;
    } else if (frame.scheme == StiaScheme::point_c) {
      for (int k = 0; k < k_users; ++k) x += symbols[k];
    } else {
      x = symbols[n - 1];
    }
    x *= amp;
    for (int k = 0; k < k_users; ++k) y(k, n - 1) = channel.row(n, k) * x;
  }
  return y;
}

Observations transmit(const ChannelTensor& channel, const PrecoderSet& frame,
                      const std::vector<Eigen::VectorXcd>& symbols, Rng& noise) {
  Observations y = transmit(channel, frame, symbols);
  for (Eigen::Index n = 0; n < y.cols(); ++n)
    for (Eigen::Index k = 0; k < y.rows(); ++k) y(k, n) += noise.complex_normal();
  return y;
}

Eigen::MatrixXcd combined_map(const ChannelTensor& channel, const PrecoderSet& frame,
                              const CombiningPlan& plan, int source) {
  Eigen::MatrixXcd raw(frame.frame_len, frame.num_tx_antennas);
  for (int n = 1; n <= frame.frame_len; ++n)
    raw.row(n - 1) = channel.row(n, plan.user) * frame.slot_map(source, n);
  return plan.combiner * raw;
}

EffectiveChannel effective_channel(const ChannelTensor& channel, const PrecoderSet& frame,
                                   int user) {
  const auto plan = combining_plan(frame.scheme, frame.num_users, frame.beta, user);
  return {user, combined_map(channel, frame, plan, user)};
}

Eigen::VectorXcd decode(const Eigen::VectorXcd& user_observations, const CombiningPlan& plan,
                        const EffectiveChannel& eff, double symbol_power) {
  if (user_observations.size() != plan.combiner.cols())
    throw InvalidArgument("decode: observation length does not match the plan");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eff.matrix);
  const auto& s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-12 * s(0)))
    throw SingularMatrix("decode: effective channel is singular");
  const Eigen::VectorXcd combined = plan.combiner * user_observations / std::sqrt(symbol_power);
  return eff.matrix.colPivHouseholderQr().solve(combined);
}

Eigen::RowVectorXcd pilot_interference_row(const ChannelTensor& channel,
                                           const PrecoderSet& frame, int user) {
  check_user(user, frame.num_users);
  Eigen::RowVectorXcd sum = Eigen::RowVectorXcd::Zero(frame.num_tx_antennas);
  for (int j = 0; j < frame.num_users; ++j)
    if (j != user) sum += channel.row(frame.ref_slots[j], user);
  return sum;
}

Eigen::VectorXcd pilot_observations(const ChannelTensor& channel, const PrecoderSet& frame,
                                    int user, int slot, const Eigen::MatrixXcd& pilots) {
  Eigen::MatrixXcd precoder_sum = Eigen::MatrixXcd::Zero(frame.num_tx_antennas,
                                                         frame.num_tx_antennas);
  for (int k = 0; k < frame.num_users; ++k) precoder_sum += frame.precoder(k, slot);
  // Flat across subcarriers: every pilot sees the same h^(k)T[slot].
  const Eigen::RowVectorXcd seen = channel.row(slot, user) * precoder_sum;
  return pilots * seen.transpose();
}

Eigen::RowVectorXcd estimate_effective_channel_pilot(const Eigen::MatrixXcd& pilots,
                                                     const Eigen::RowVectorXcd& known_interference,
                                                     const Eigen::VectorXcd& observations) {
  if (pilots.rows() != observations.size() || pilots.cols() != known_interference.size())
    throw InvalidArgument("estimate_effective_channel_pilot: dimension mismatch");
  if (pilots.rows() < pilots.cols())
    throw RankDeficient("estimate_effective_channel_pilot: need B_t >= N_t pilots");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pilots, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-10 * s(0)))
    throw RankDeficient("estimate_effective_channel_pilot: pilots are linearly dependent");

  const Eigen::VectorXcd cleaned = observations - pilots * known_interference.transpose();
  return svd.solve(cleaned).transpose();
}

void write_frame_json(std::ostream& out, const PrecoderSet& frame) {
  nlohmann::ordered_json doc;
  doc["scheme"] = std::string(to_string(frame.scheme));
  doc["T"] = frame.frame_len;
  doc["beta"] = frame.beta;
  doc["symbol_power"] = frame.symbol_power;
  auto& entries = doc["entries"] = nlohmann::ordered_json::array();
  for (int n : frame.phase2_slots) {
    for (int k = 0; k < frame.num_users; ++k) {
      const auto& v = frame.precoder(k, n);
      auto values = nlohmann::ordered_json::array();
      for (Eigen::Index r = 0; r < v.rows(); ++r)
        for (Eigen::Index c = 0; c < v.cols(); ++c)
          values.push_back({v(r, c).real(), v(r, c).imag()});
      entries.push_back({{"slot", n}, {"user", k}, {"V", values}});
    }
  }
  out << doc.dump(2) << '\n';
}

}  // namespace stia
