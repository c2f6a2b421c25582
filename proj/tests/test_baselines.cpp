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

#include <cmath>
#include <set>
#include <sstream>

#include <doctest.h>

#include "helpers.hpp"
#include "stia/baselines.hpp"
#include "stia/regions.hpp"

using namespace stia;
using stia::testing::random_vector;

namespace {

ChannelTensor fast_channel(int k, int slots, std::uint64_t seed) {
  return sample_channel(FadingSpec::standard(k, FadingModel::iid_fast(), seed), slots, 0);
}

}  // namespace

TEST_CASE("ZF rotates the idle user round-robin") {
  CHECK(zf_served_users(3, 1) == std::vector<int>{0, 2});
  CHECK(zf_served_users(3, 2) == std::vector<int>{0, 1});
  CHECK(zf_served_users(3, 3) == std::vector<int>{1, 2});
  CHECK(zf_served_users(3, 4) == std::vector<int>{0, 2});
  CHECK(zf_served_users(5, 7).size() == 4);
  CHECK_THROWS_AS(zf_served_users(3, 0), InvalidArgument);
}

TEST_CASE("ZF beams null the other served users") {
  for (int k : {3, 4, 5}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto ch = fast_channel(k, k, seed);
      for (int slot = 1; slot <= k; ++slot) {
        const auto zf = zf_frame(ch, slot, 100.0);
        CHECK(zf.served.size() == static_cast<std::size_t>(k - 1));
        CHECK(zf.power_per_user == doctest::Approx(100.0 / (k - 1)));
        for (std::size_t i = 0; i < zf.served.size(); ++i) {
          CHECK(zf.beamformers.col(i).norm() == doctest::Approx(1.0));
          for (std::size_t j = 0; j < zf.served.size(); ++j) {
            if (i == j) continue;
            const double leak = std::abs((ch.row(slot, zf.served[j]) * zf.beamformers.col(i))(0));
            CHECK(leak <= 1e-9);
          }
          const double g = std::norm((ch.row(slot, zf.served[i]) * zf.beamformers.col(i))(0));
          CHECK(zf.rates[i] == doctest::Approx(std::log2(1.0 + zf.power_per_user * g)));
        }
      }
    }
  }
}

TEST_CASE("single-user ZF is the matched filter") {
  const auto ch = fast_channel(3, 1, 4);
  const Eigen::MatrixXcd row = ch.row(1, 2);
  const auto w = zf_beamformers(row);
  const Eigen::VectorXcd mf = row.adjoint() / row.norm();
  CHECK((w.col(0) - mf).norm() <= 1e-12);
}

TEST_CASE("ZF rejects an ill-conditioned served set") {
  auto ch = fast_channel(3, 1, 5);
  for (int a = 0; a < 2; ++a) ch.gain(1, 2, a) = ch.gain(1, 0, a);
  CHECK_THROWS_AS(zf_frame(ch, 1, 1.0), IllConditioned);  // serves users 0 and 2
}

TEST_CASE("TDMA rates") {
  const auto ch = fast_channel(3, 3, 6);
  for (int slot = 1; slot <= 3; ++slot) {
    const auto with = tdma_frame(ch, slot, 50.0, true);
    const auto without = tdma_frame(ch, slot, 50.0, false);
    CHECK(with.user == slot - 1);
    CHECK(with.rate == doctest::Approx(std::log2(1.0 + 50.0 * ch.row(slot, with.user).squaredNorm())));
    CHECK(without.rate == doctest::Approx(std::log2(1.0 + 50.0 * std::norm(ch.gain(slot, with.user, 0)))));
    CHECK(with.rate >= without.rate);
    CHECK(with.rate <= std::log2(1.0 + 50.0 * 2 * 1e6));
  }
  CHECK(tdma_frame(fast_channel(3, 4, 6), 4, 1.0, false).user == 0);
}

TEST_CASE("two-user retrospective alignment decodes exactly") {
  Rng rng(8);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto ch = fast_channel(3, 3, 700 + seed);
    const auto f = mat2_frame(ch, 0, 1, 1e3);
    const auto a = random_vector(rng, 2);
    const auto b = random_vector(rng, 2);
    const auto y = mat2_transmit(ch, f, a, b);
    const auto got_a = decode(y.row(0).transpose(), f.plans[0], f.effective[0], f.symbol_power);
    const auto got_b = decode(y.row(1).transpose(), f.plans[1], f.effective[1], f.symbol_power);
    CHECK((got_a - a).norm() <= 1e-8 * a.norm());
    CHECK((got_b - b).norm() <= 1e-8 * b.norm());
  }
}

TEST_CASE("two-user alignment signals and power") {
  const auto ch = fast_channel(4, 3, 9);
  const auto f = mat2_frame(ch, 2, 0, 40.0);
  CHECK(f.symbol_power == doctest::Approx(20.0));
  const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(2);
  CHECK(mat2_signals(ch, f, zero, zero).norm() == 0.0);

  // Slot three averages exactly P over unit-power symbols.
  const double hb1 = ch.row(1, 0).head(2).squaredNorm();
  const double ha2 = ch.row(2, 2).head(2).squaredNorm();
  CHECK(f.alpha * f.alpha * f.symbol_power * (hb1 + ha2) == doctest::Approx(40.0));

  Rng rng(10);
  const auto a = random_vector(rng, 2);
  const auto b = random_vector(rng, 2);
  const auto x = mat2_signals(ch, f, a, b);
  CHECK(x.rows() == 3);
  CHECK(x(2, 0) == std::complex<double>(0.0));
  CHECK(x.col(2).tail(2).norm() == 0.0);
  const std::complex<double> u = (ch.row(1, 0).head(2) * a)(0) + (ch.row(2, 2).head(2) * b)(0);
  CHECK(std::abs(x(0, 2) - f.alpha * std::sqrt(f.symbol_power) * u) <= 1e-12 * std::abs(x(0, 2)));

  const auto narrow = sample_channel([] {
    auto s = FadingSpec::standard(3, FadingModel::iid_fast(), 1);
    s.num_tx_antennas = 1;
    return s;
  }(), 3, 0);
  CHECK_THROWS_AS(mat2_frame(narrow, 0, 1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(mat2_frame(ch, 1, 1, 1.0), InvalidArgument);
}

TEST_CASE("reference partition for three users and three sets") {
  const auto p = partition_slots(3, 3);
  CHECK(p.total_slots == 15);
  CHECK(p.stia_sets == std::vector<std::vector<int>>{{1, 5, 9}, {4, 8, 12}, {7, 11, 15}});
  CHECK(p.zf_set == std::vector<int>{2, 3, 6, 14});
  CHECK(p.tdma_set == std::vector<int>{10, 13});
  CHECK(p.assignment(4) == "STIA:2");
  CHECK(p.assignment(14) == "ZF");
  CHECK(p.assignment(13) == "TDMA");
}

TEST_CASE("single-set partition") {
  const auto p = partition_slots(3, 1);
  CHECK(p.stia_sets == std::vector<std::vector<int>>{{1, 5, 9}});
  CHECK(p.zf_set == std::vector<int>{2, 3, 6, 8});
  CHECK(p.tdma_set == std::vector<int>{4, 7});
}

TEST_CASE("partition invariants") {
  for (int k : {3, 4, 5, 6}) {
    for (int n : {1, 2, 5, 9}) {
      const auto p = partition_slots(k, n);
      CHECK_NOTHROW(p.validate());
      CHECK(p.total_slots == k * n + k * (k - 1));
      CHECK(p.zf_set.size() == static_cast<std::size_t>((k - 1) * (k - 1)));
      CHECK(p.tdma_set.size() == static_cast<std::size_t>(k - 1));
      std::multiset<int> all(p.zf_set.begin(), p.zf_set.end());
      all.insert(p.tdma_set.begin(), p.tdma_set.end());
      for (const auto& set : p.stia_sets) {
        CHECK(set.size() == static_cast<std::size_t>(k));
        // One delayed-CSI slot (first of a block), then K-1 current-CSI slots,
        // each in its own block.
        CHECK((set[0] - 1) % k == 0);
        std::set<int> blocks;
        for (std::size_t j = 0; j < set.size(); ++j) {
          blocks.insert((set[j] - 1) / k);
          if (j > 0) CHECK((set[j] - 1) % k != 0);
        }
        CHECK(blocks.size() == set.size());
        all.insert(set.begin(), set.end());
      }
      CHECK(all.size() == static_cast<std::size_t>(p.total_slots));
      for (int s = 1; s <= p.total_slots; ++s) CHECK(all.count(s) == 1);
      // TDMA slots are exactly the leftover first slots of a block.
      for (int s : p.tdma_set) CHECK((s - 1) % k == 0);
    }
  }
  CHECK_THROWS_AS(partition_slots(2, 1), InvalidArgument);
  CHECK_THROWS_AS(partition_slots(3, 0), InvalidArgument);
}

TEST_CASE("partition CSV") {
  std::ostringstream out;
  write_partition_csv(out, partition_slots(3, 1));
  CHECK(out.str().rfind("slot,assignment\n1,STIA:1\n2,ZF\n3,ZF\n4,TDMA\n", 0) == 0);
}

TEST_CASE("composite schedule accounting") {
  for (int k : {3, 4}) {
    for (int n : {1, 3, 10}) {
      const auto p = partition_slots(k, n);
      const auto ch = sample_channel(FadingSpec::standard(k, FadingModel::block(k), 40 + n),
                                     p.total_slots, 0);
      const auto r = timeshare_frame(k, n, ch, 1e3);
      CHECK(r.symbols_per_slot() == finite_n_dof(k, n));
      CHECK(r.symbols_delivered == (k - 1) * k * n + (k - 1) * (k - 1) * (k - 1) + (k - 1));
      CHECK(r.slots_used == k * n + k * (k - 1));
      CHECK(r.bits > 0.0);
    }
  }
  const auto ch = sample_channel(FadingSpec::standard(3, FadingModel::block(3), 1), 15, 0);
  CHECK(timeshare_frame(3, 3, ch, 1.0).symbols_per_slot() == Rational(28, 15));
}

TEST_CASE("composite schedule needs block fading matching the feedback model") {
  const auto fast = fast_channel(3, 15, 2);
  CHECK_THROWS_AS(timeshare_frame(3, 3, fast, 1.0), CsitError);
  const auto wrong = sample_channel(FadingSpec::standard(3, FadingModel::block(5), 2), 15, 0);
  CHECK_THROWS_AS(timeshare_frame(3, 3, wrong, 1.0), CsitError);
  const auto short_ch = sample_channel(FadingSpec::standard(3, FadingModel::block(3), 2), 12, 0);
  CHECK_THROWS_AS(timeshare_frame(3, 3, short_ch, 1.0), InvalidArgument);
}
