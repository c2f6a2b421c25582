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

#include "stia/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "stia/errors.hpp"
#include "stia/feedback.hpp"
#include "stia/rate.hpp"

namespace stia {

std::vector<int> zf_served_users(int num_users, int slot) {
  if (slot < 1) throw InvalidArgument("zf_served_users: slots are 1-based");
  const int excluded = slot % num_users;
  std::vector<int> served;
  for (int u = 0; u < num_users; ++u)
    if (u != excluded) served.push_back(u);
  return served;
}

Eigen::MatrixXcd zf_beamformers(const Eigen::MatrixXcd& served_rows) {
  const Eigen::Index m = served_rows.rows();
  if (m < 1 || m > served_rows.cols())
    throw InvalidArgument("zf_beamformers: need 1 <= served users <= N_t");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(served_rows, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cond = s(m - 1) > 0.0 ? s(0) / s(m - 1) : INFINITY;
  if (cond > kMaxConditionNumber)
    throw IllConditioned("zf_beamformers: served channel is ill-conditioned", cond);
  // Minimum-norm right inverse, H^* (H H^*)^-1.
  Eigen::MatrixXcd w = svd.solve(Eigen::MatrixXcd::Identity(m, m));
  w.colwise().normalize();
  return w;
}

double ZfResult::bits() const {
  double total = 0.0;
  for (double r : rates) total += r;
  return total;
}

ZfResult zf_frame(const ChannelTensor& channel, int slot, double total_power) {
  ZfResult out;
  out.slot = slot;
  out.served = zf_served_users(channel.num_users(), slot);
  if (static_cast<int>(out.served.size()) > channel.num_tx_antennas())
    out.served.resize(channel.num_tx_antennas());
  const Eigen::MatrixXcd rows = channel.stacked(slot, out.served);
  out.beamformers = zf_beamformers(rows);
  out.power_per_user = total_power / static_cast<double>(out.served.size());
  for (std::size_t i = 0; i < out.served.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    const double gain = std::norm((rows.row(idx) * out.beamformers.col(idx))(0));
    out.rates.push_back(std::log2(1.0 + out.power_per_user * gain));
  }
  return out;
}

TdmaResult tdma_frame(const ChannelTensor& channel, int slot, double total_power, bool use_csit) {
  if (slot < 1) throw InvalidArgument("tdma_frame: slots are 1-based");
  TdmaResult out;
  out.slot = slot;
  out.user = (slot - 1) % channel.num_users();
  const Eigen::RowVectorXcd h = channel.row(slot, out.user);
  if (use_csit) {
    out.beamformer = h.adjoint() / h.norm();
  } else {
    out.beamformer = Eigen::VectorXcd::Zero(channel.num_tx_antennas());
    out.beamformer(0) = 1.0;
  }
  const double gain = std::norm((h * out.beamformer)(0));
  out.rate = std::log2(1.0 + total_power * gain);
  return out;
}

namespace {

Eigen::RowVectorXcd first_two(const ChannelTensor& channel, int slot, int user) {
  return channel.row(slot, user).head(2);
}

void require_full_rank(const Eigen::MatrixXcd& m, const char* what) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-12 * s(0))) throw SingularMatrix(what);
}

}  // namespace

Mat2Frame mat2_frame(const ChannelTensor& channel, int user_a, int user_b, double total_power) {
  if (channel.num_tx_antennas() < 2) throw InvalidArgument("mat2_frame: needs N_t >= 2");
  if (channel.num_slots() < 3) throw InvalidArgument("mat2_frame: needs three slots");
  if (user_a == user_b || user_a < 0 || user_b < 0 || user_a >= channel.num_users() ||
      user_b >= channel.num_users())
    throw InvalidArgument("mat2_frame: need two distinct users");

  Mat2Frame f;
  f.user_a = user_a;
  f.user_b = user_b;
  f.symbol_power = total_power / 2.0;

  const Eigen::RowVectorXcd ha1 = first_two(channel, 1, user_a);
  const Eigen::RowVectorXcd hb1 = first_two(channel, 1, user_b);
  const Eigen::RowVectorXcd ha2 = first_two(channel, 2, user_a);
  const Eigen::RowVectorXcd hb2 = first_two(channel, 2, user_b);
  // E|sqrt(p_s) u|^2 = p_s (||h_B[1]||^2 + ||h_A[2]||^2); scale it to P.
  f.alpha = std::sqrt(total_power / (f.symbol_power * (hb1.squaredNorm() + ha2.squaredNorm())));

  const cd ga = channel.gain(3, user_a, 0);
  const cd gb = channel.gain(3, user_b, 0);

  // User A: y[1] carries h_A[1] s^A; y[3]/(alpha g_A) - y[2] leaves h_B[1] s^A.
  auto& ca = f.plans[0];
  ca.user = user_a;
  ca.combiner = Eigen::MatrixXcd::Zero(2, 3);
  ca.combiner(0, 0) = 1.0;
  ca.combiner(1, 1) = -1.0;
  ca.combiner(1, 2) = 1.0 / (f.alpha * ga);
  ca.noise_cov = ca.combiner * ca.combiner.adjoint();
  f.effective[0].user = user_a;
  f.effective[0].matrix.resize(2, 2);
  f.effective[0].matrix << ha1, hb1;

  // User B: y[2] carries h_B[2] s^B; y[3]/(alpha g_B) - y[1] leaves h_A[2] s^B.
  auto& cb = f.plans[1];
  cb.user = user_b;
  cb.combiner = Eigen::MatrixXcd::Zero(2, 3);
  cb.combiner(0, 1) = 1.0;
  cb.combiner(1, 0) = -1.0;
  cb.combiner(1, 2) = 1.0 / (f.alpha * gb);
  cb.noise_cov = cb.combiner * cb.combiner.adjoint();
  f.effective[1].user = user_b;
  f.effective[1].matrix.resize(2, 2);
  f.effective[1].matrix << hb2, ha2;

  require_full_rank(f.effective[0].matrix, "mat2_frame: user A effective channel is singular");
  require_full_rank(f.effective[1].matrix, "mat2_frame: user B effective channel is singular");
  return f;
}

Eigen::MatrixXcd mat2_signals(const ChannelTensor& channel, const Mat2Frame& frame,
                              const Eigen::VectorXcd& symbols_a,
                              const Eigen::VectorXcd& symbols_b) {
  if (symbols_a.size() != 2 || symbols_b.size() != 2)
    throw InvalidArgument("mat2_signals: two symbols per user");
  const double amp = std::sqrt(frame.symbol_power);
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(channel.num_tx_antennas(), 3);
  x.col(0).head(2) = amp * symbols_a;
  x.col(1).head(2) = amp * symbols_b;
  const cd u = (first_two(channel, 1, frame.user_b) * symbols_a)(0) +
               (first_two(channel, 2, frame.user_a) * symbols_b)(0);
  x(0, 2) = frame.alpha * amp * u;
  return x;
}

Observations mat2_transmit(const ChannelTensor& channel, const Mat2Frame& frame,
                           const Eigen::VectorXcd& symbols_a, const Eigen::VectorXcd& symbols_b) {
  const Eigen::MatrixXcd x = mat2_signals(channel, frame, symbols_a, symbols_b);
  Observations y(2, 3);
  const std::array<int, 2> users{frame.user_a, frame.user_b};
  for (int n = 1; n <= 3; ++n)
    for (int i = 0; i < 2; ++i) y(i, n - 1) = (channel.row(n, users[i]) * x.col(n - 1))(0);
  return y;
}

Observations mat2_transmit(const ChannelTensor& channel, const Mat2Frame& frame,
                           const Eigen::VectorXcd& symbols_a, const Eigen::VectorXcd& symbols_b,
                           Rng& noise) {
  Observations y = mat2_transmit(channel, frame, symbols_a, symbols_b);
  for (Eigen::Index n = 0; n < y.cols(); ++n)
    for (Eigen::Index i = 0; i < y.rows(); ++i) y(i, n) += noise.complex_normal();
  return y;
}

std::string IndexPartition::assignment(int slot) const {
  for (std::size_t l = 0; l < stia_sets.size(); ++l)
    if (std::find(stia_sets[l].begin(), stia_sets[l].end(), slot) != stia_sets[l].end())
      return "STIA:" + std::to_string(l + 1);
  if (std::find(zf_set.begin(), zf_set.end(), slot) != zf_set.end()) return "ZF";
  if (std::find(tdma_set.begin(), tdma_set.end(), slot) != tdma_set.end()) return "TDMA";
  throw InvalidArgument("IndexPartition: slot " + std::to_string(slot) + " is unassigned");
}

void IndexPartition::validate() const {
  const int k = num_users;
  auto fail = [](const std::string& why) { throw InvalidArgument("IndexPartition: " + why); };
  if (total_slots != k * n + k * (k - 1)) fail("wrong total slot count");
  if (static_cast<int>(stia_sets.size()) != n) fail("need n STIA sets");

  auto block_of = [k](int s) { return (s - 1) / k + 1; };
  auto is_first = [k](int s) { return (s - 1) % k == 0; };

  std::set<int> seen;
  auto claim = [&](int s) {
    if (s < 1 || s > total_slots) fail("slot out of range");
    if (!seen.insert(s).second) fail("slot " + std::to_string(s) + " assigned twice");
  };
  for (const auto& set : stia_sets) {
    if (static_cast<int>(set.size()) != k) fail("STIA set must have K slots");
    if (!is_first(set[0])) fail("STIA set must start at a delayed-CSI slot");
    std::set<int> blocks;
    for (std::size_t j = 0; j < set.size(); ++j) {
      claim(set[j]);
      if (j > 0 && is_first(set[j])) fail("STIA set has two delayed-CSI slots");
      if (!blocks.insert(block_of(set[j])).second) fail("STIA set reuses a coherence block");
    }
  }
  for (int s : zf_set) {
    claim(s);
    if (is_first(s)) fail("ZF slot without current CSI");
  }
  for (int s : tdma_set) {
    claim(s);
    if (!is_first(s)) fail("TDMA slot should be a delayed-CSI slot");
  }
  if (static_cast<int>(seen.size()) != total_slots) fail("sets do not cover every slot");
  if (static_cast<int>(zf_set.size()) != (k - 1) * (k - 1)) fail("|I_ZF| != (K-1)^2");
  if (static_cast<int>(tdma_set.size()) != k - 1) fail("|I_TDMA| != K-1");
}

IndexPartition partition_slots(int num_users, int n) {
  if (num_users < 3 || n < 1) throw InvalidArgument("partition_slots: need K >= 3 and n >= 1");
  const int k = num_users;
  IndexPartition p;
  p.num_users = k;
  p.n = n;
  p.total_slots = k * (n + k - 1);

  auto slot_at = [k](int block, int offset) { return (block - 1) * k + offset; };
  std::set<int> used;
  for (int l = 1; l <= n; ++l) {
    auto& set = p.stia_sets.emplace_back();
    set.push_back(slot_at(l, 1));
    for (int j = 1; j <= k - 1; ++j) set.push_back(slot_at(l + j, j + 1));
    used.insert(set.begin(), set.end());
  }
  for (int s = 1; s <= p.total_slots; ++s) {
    if (used.contains(s)) continue;
    ((s - 1) % k == 0 ? p.tdma_set : p.zf_set).push_back(s);
  }
  p.validate();
  return p;
}

void write_partition_csv(std::ostream& out, const IndexPartition& partition) {
  out << "slot,assignment\n";
  for (int s = 1; s <= partition.total_slots; ++s) out << s << ',' << partition.assignment(s) << '\n';
}

TimeshareResult timeshare_frame(int num_users, int n, const ChannelTensor& channel,
                                double total_power) {
  const int k = num_users;
  if (channel.num_users() != k) throw InvalidArgument("timeshare_frame: user count mismatch");
  TimeshareResult out;
  out.partition = partition_slots(k, n);
  const auto& part = out.partition;
  if (channel.num_slots() < part.total_slots)
    throw InvalidArgument("timeshare_frame: channel shorter than the partition");

  const FeedbackModel model = FeedbackModel2{1, k};
  auto view = [&](int slot) { return csit_available(model, channel.spec(), slot); };

  for (const auto& set : part.stia_sets) {
    for (std::size_t j = 1; j < set.size(); ++j) {
      const auto v = view(set[j]);
      if (!v.knows_all(k, set[j]) || !v.knows_all(k, set[0]))
        throw CsitError("timeshare_frame: STIA slot lacks current or reference CSI");
    }
    const ChannelTensor sub = channel.gather(set);
    const PrecoderSet frame = build_frame(StiaScheme::point_c, sub, total_power);
    for (int u = 0; u < k; ++u) {
      const auto plan = combining_plan(frame.scheme, k, frame.beta, u);
      const UserLink link{effective_channel(sub, frame, u).matrix, plan.noise_cov};
      out.bits += link_bits(link, frame.symbol_power);
    }
    out.symbols_delivered += frame.symbols_delivered();
  }
  for (int s : part.zf_set) {
    if (!view(s).knows_all(k, s)) throw CsitError("timeshare_frame: ZF slot lacks current CSI");
    const auto zf = zf_frame(channel, s, total_power);
    out.bits += zf.bits();
    out.symbols_delivered += static_cast<std::int64_t>(zf.served.size());
  }
  for (int s : part.tdma_set) {
    out.bits += tdma_frame(channel, s, total_power, false).rate;
    out.symbols_delivered += 1;
  }
  out.slots_used = part.total_slots;
  return out;
}

}  // namespace stia
