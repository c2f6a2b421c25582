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
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "helpers.hpp"
#include "stia/verify.hpp"

using namespace stia;
using stia::testing::draw_frame;
using stia::testing::random_matrix;
using stia::testing::random_vector;

namespace {

constexpr StiaScheme kBoth[] = {StiaScheme::point_b, StiaScheme::point_c};

double relative(const Eigen::MatrixXcd& got, const Eigen::MatrixXcd& want) {
  return (got - want).norm() / want.norm();
}

}  // namespace

TEST_CASE("aligned precoder reproduces the reference interference pattern") {
  for (int k : {3, 4}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto ch = sample_channel(FadingSpec::standard(k, FadingModel::iid_fast(), seed), k, 0);
      for (int user = 0; user < k; ++user) {
        const auto v = aligned_precoder(ch, user, 2, 1);
        const Eigen::MatrixXcd target = ch.stacked_except(1, user);
        CHECK(relative(ch.stacked_except(2, user) * v, target) <= 1e-9);
        // Row by row: each other user's slot-2 row maps onto its slot-1 row.
        for (int j = 0; j < k; ++j) {
          if (j == user) continue;
          const Eigen::RowVectorXcd got = ch.row(2, j) * v;
          CHECK((got - ch.row(1, j)).norm() <= 1e-9 * target.norm());
        }
      }
    }
  }
}

TEST_CASE("aligned precoder is the identity within one coherence block") {
  const auto ch = sample_channel(FadingSpec::standard(3, FadingModel::block(3), 4), 3, 0);
  const auto v = aligned_precoder(ch, 0, 2, 1);
  CHECK((v - Eigen::MatrixXcd::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("aligned precoder preconditions") {
  auto spec = FadingSpec::standard(4, FadingModel::iid_fast(), 1);
  spec.num_tx_antennas = 2;
  const auto narrow = sample_channel(spec, 2, 0);
  CHECK_THROWS_AS(aligned_precoder(narrow, 0, 2, 1), InvalidArgument);

  auto ch = sample_channel(FadingSpec::standard(3, FadingModel::iid_fast(), 2), 2, 0);
  // Users 1 and 2 share a direction in slot 2: H_0^c[2] is singular.
  for (int a = 0; a < 2; ++a) ch.gain(2, 2, a) = 2.0 * ch.gain(2, 1, a);
  CHECK_THROWS_AS(aligned_precoder(ch, 0, 2, 1), IllConditioned);
  try {
    aligned_precoder(ch, 0, 2, 1);
  } catch (const IllConditioned& e) {
    CHECK(e.condition_number > kMaxConditionNumber);
  }
}

TEST_CASE("least squares precoder matches exact alignment when square") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto ch = sample_channel(FadingSpec::standard(4, FadingModel::iid_fast(), seed), 4, 0);
    for (int user = 0; user < 4; ++user) {
      const auto exact = aligned_precoder(ch, user, 3, 1);
      const auto ls = ls_precoder(ch, user, 3, 1);
      CHECK((ls - exact).norm() <= 1e-9 * exact.norm());
    }
  }
}

TEST_CASE("least squares precoder with fewer antennas") {
  auto spec = FadingSpec::standard(4, FadingModel::iid_fast(), 77);
  spec.num_tx_antennas = 2;
  Rng rng(99);
  for (std::uint64_t stream = 0; stream < 10; ++stream) {
    const auto ch = sample_channel(spec, 4, stream);
    for (int user = 0; user < 4; ++user) {
      const auto v = ls_precoder(ch, user, 2, 1);
      const Eigen::MatrixXcd a = ch.stacked_except(2, user);
      const Eigen::MatrixXcd b = ch.stacked_except(1, user);
      const Eigen::MatrixXcd residual = b - a * v;
      // Normal equations: the residual is orthogonal to the column space.
      CHECK((a.adjoint() * residual).norm() <= 1e-8 * a.norm() * b.norm());
      const double best = residual.norm();
      for (int p = 0; p < 100; ++p) {
        const Eigen::MatrixXcd delta = 1e-3 * random_matrix(rng, 2, 2);
        CHECK((b - a * (v + delta)).norm() >= best);
      }
    }
  }
}

TEST_CASE("least squares precoder rejects rank-deficient systems") {
  auto spec = FadingSpec::standard(4, FadingModel::iid_fast(), 5);
  spec.num_tx_antennas = 2;
  auto ch = sample_channel(spec, 2, 0);
  // Every other user's slot-2 row on one line: rank 1.
  for (int u : {2, 3})
    for (int a = 0; a < 2; ++a) ch.gain(2, u, a) = (u + 1.0) * ch.gain(2, 1, a);
  CHECK_THROWS_AS(ls_precoder(ch, 0, 2, 1), RankDeficient);
}

TEST_CASE("frame layout") {
  const auto c = draw_frame(StiaScheme::point_c, 3, 1).frame;
  CHECK(c.frame_len == 3);
  CHECK(c.phase1_slots == std::vector<int>{1});
  CHECK(c.phase2_slots == std::vector<int>{2, 3});
  CHECK(c.ref_slots == std::vector<int>{1, 1, 1});
  CHECK(c.precoders.size() == 2);
  CHECK(c.precoders[0].size() == 3);
  CHECK(c.symbols_delivered() == 6);

  const auto b = draw_frame(StiaScheme::point_b, 3, 1).frame;
  CHECK(b.frame_len == 4);
  CHECK(b.phase1_slots == std::vector<int>{1, 2, 3});
  CHECK(b.phase2_slots == std::vector<int>{4});
  CHECK(b.ref_slots == std::vector<int>{1, 2, 3});
  CHECK(b.symbols_delivered() == 6);

  const auto b5 = draw_frame(StiaScheme::point_b, 5, 1).frame;
  CHECK(b5.frame_len == 8);
  CHECK(b5.phase2_slots == std::vector<int>{6, 7, 8});
  CHECK(b5.symbols_delivered() == 20);
  CHECK(b5.symbol_power == doctest::Approx(1e4 / 20));
}

TEST_CASE("phase-two power never exceeds the budget") {
  const double power = 250.0;
  for (auto scheme : kBoth)
    for (int k : {3, 4, 5})
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto f = draw_frame(scheme, k, seed, power).frame;
        double peak = 0.0;
        for (int n : f.phase2_slots) {
          double energy = 0.0;
          for (int u = 0; u < k; ++u) energy += f.precoder(u, n).squaredNorm();
          const double slot_power = f.symbol_power * f.beta * f.beta * energy;
          CHECK(slot_power <= power * (1 + 1e-12));
          peak = std::max(peak, slot_power);
        }
        CHECK(peak == doctest::Approx(power));
      }
}

TEST_CASE("combining plan noise covariances") {
  const auto c = combining_plan(StiaScheme::point_c, 3, 1.0, 0);
  Eigen::Matrix2cd want;
  want << 2, 1, 1, 2;
  CHECK((c.noise_cov - want).norm() <= 1e-15);

  const auto b = combining_plan(StiaScheme::point_b, 3, 1.0, 1);
  CHECK(b.noise_cov(0, 0).real() == doctest::Approx(1.0));
  CHECK(b.noise_cov(1, 1).real() == doctest::Approx(3.0));
  CHECK(std::abs(b.noise_cov(0, 1)) <= 1e-15);

  // As beta shrinks the phase-two rows see only their own slot's noise.
  const auto small = combining_plan(StiaScheme::point_c, 4, 1e-9, 2);
  CHECK((small.noise_cov - Eigen::MatrixXcd::Identity(3, 3)).norm() <= 1e-8);

  CHECK_THROWS_AS(combining_plan(StiaScheme::point_c, 3, 0.0, 0), InvalidArgument);
}

TEST_CASE("zero symbols give zero observations") {
  const auto d = draw_frame(StiaScheme::point_c, 3, 3);
  const std::vector<Eigen::VectorXcd> zeros(3, Eigen::VectorXcd::Zero(2));
  CHECK(transmit(d.channel, d.frame, zeros).norm() == 0.0);
}

TEST_CASE("combining removes every other user's symbols") {
  Rng rng(5);
  for (auto scheme : kBoth)
    for (int k : {3, 4, 5})
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto d = draw_frame(scheme, k, 100 + seed);
        for (int user = 0; user < k; ++user) {
          std::vector<Eigen::VectorXcd> symbols;
          for (int j = 0; j < k; ++j)
            symbols.push_back(j == user ? Eigen::VectorXcd::Zero(k - 1) : random_vector(rng, k - 1));
          const auto y = transmit(d.channel, d.frame, symbols);
          const auto plan = combining_plan(scheme, k, d.frame.beta, user);
          const Eigen::VectorXcd raw = y.row(user).transpose();
          const Eigen::VectorXcd combined = plan.combiner * raw;
          CHECK(combined.norm() <= 1e-8 * raw.norm());
        }
      }
}

TEST_CASE("noiseless round trip recovers every symbol") {
  Rng rng(6);
  for (auto scheme : kBoth)
    for (int k : {3, 4, 5})
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto d = draw_frame(scheme, k, 1000 + seed);
        CHECK(max_decode_error(d.channel, d.frame, rng) <= 1e-8);
      }
}

TEST_CASE("effective channel rows follow the subtraction structure") {
  const auto d = draw_frame(StiaScheme::point_c, 3, 8);
  for (int user = 0; user < 3; ++user) {
    const auto eff = effective_channel(d.channel, d.frame, user);
    for (int n = 2; n <= 3; ++n) {
      const Eigen::RowVectorXcd want =
          d.frame.beta * (d.channel.row(n, user) * d.frame.precoder(user, n) - d.channel.row(1, user));
      CHECK((eff.matrix.row(n - 2) - want).norm() <= 1e-12 * want.norm());
    }
  }
  const auto b = draw_frame(StiaScheme::point_b, 3, 8);
  for (int user = 0; user < 3; ++user) {
    const auto eff = effective_channel(b.channel, b.frame, user);
    CHECK((eff.matrix.row(0) - b.channel.row(user + 1, user)).norm() <= 1e-12);
    const Eigen::RowVectorXcd second =
        b.frame.beta * b.channel.row(4, user) * b.frame.precoder(user, 4);
    CHECK((eff.matrix.row(1) - second).norm() <= 1e-12 * second.norm());
  }
}

TEST_CASE("effective channels have full rank") {
  int full = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto d = draw_frame(StiaScheme::point_c, 3, 5000 + seed);
    bool ok = true;
    for (int user = 0; user < 3; ++user) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(effective_channel(d.channel, d.frame, user).matrix);
      const auto& s = svd.singularValues();
      ok = ok && s(1) > 1e-6 * s(0);
    }
    full += ok;
  }
  CHECK(full == 1000);
}

TEST_CASE("combined noise covariance matches the plan") {
  for (auto scheme : kBoth) {
    const auto d = draw_frame(scheme, 3, 21);
    const std::vector<Eigen::VectorXcd> zeros(3, Eigen::VectorXcd::Zero(2));
    Rng noise(stream_key({21, static_cast<std::uint64_t>(scheme)}));
    for (int user = 0; user < 3; ++user) {
      const auto plan = combining_plan(scheme, 3, d.frame.beta, user);
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(2, 2);
      const int trials = 10000;
      for (int t = 0; t < trials; ++t) {
        const auto y = transmit(d.channel, d.frame, zeros, noise);
        const Eigen::VectorXcd c = plan.combiner * y.row(user).transpose();
        acc += c * c.adjoint();
      }
      acc /= trials;
      CHECK(relative(acc, plan.noise_cov) <= 0.05);
    }
  }
}

TEST_CASE("decoding pure noise gives the predicted estimate covariance") {
  const auto d = draw_frame(StiaScheme::point_c, 3, 22, 10.0);
  const std::vector<Eigen::VectorXcd> zeros(3, Eigen::VectorXcd::Zero(2));
  const auto plan = combining_plan(StiaScheme::point_c, 3, d.frame.beta, 0);
  const auto eff = effective_channel(d.channel, d.frame, 0);
  const Eigen::MatrixXcd inv = eff.matrix.inverse();
  const Eigen::MatrixXcd want = inv * plan.noise_cov * inv.adjoint() / d.frame.symbol_power;
  Rng noise(23);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(2, 2);
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const auto y = transmit(d.channel, d.frame, zeros, noise);
    const auto s = decode(y.row(0).transpose(), plan, eff, d.frame.symbol_power);
    acc += s * s.adjoint();
  }
  CHECK(relative(acc / trials, want) <= 0.05);
}

TEST_CASE("decode rejects a singular effective channel") {
  const auto plan = combining_plan(StiaScheme::point_c, 3, 1.0, 0);
  EffectiveChannel eff{0, Eigen::MatrixXcd::Zero(2, 2)};
  eff.matrix(0, 0) = 1.0;
  CHECK_THROWS_AS(decode(Eigen::VectorXcd::Ones(3), plan, eff, 1.0), SingularMatrix);
}

TEST_CASE("pilot estimation recovers the effective channel row") {
  Rng rng(31);
  for (auto scheme : kBoth) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto d = draw_frame(scheme, 3, 300 + seed);
      const int slot = d.frame.phase2_slots.front();
      for (int user = 0; user < 3; ++user) {
        const Eigen::MatrixXcd pilots = random_matrix(rng, 2, 2);
        const auto obs = pilot_observations(d.channel, d.frame, user, slot, pilots);
        const auto known = pilot_interference_row(d.channel, d.frame, user);
        const auto got = estimate_effective_channel_pilot(pilots, known, obs);
        const Eigen::RowVectorXcd want = d.channel.row(slot, user) * d.frame.precoder(user, slot);
        CHECK((got - want).norm() <= 1e-8 * want.norm());
      }
    }
  }
  const auto d = draw_frame(StiaScheme::point_c, 3, 7);
  const Eigen::RowVectorXcd known = pilot_interference_row(d.channel, d.frame, 0);
  CHECK((known - 2.0 * d.channel.row(1, 0)).norm() <= 1e-15);

  const Eigen::MatrixXcd one = random_matrix(rng, 1, 2);
  const auto obs = pilot_observations(d.channel, d.frame, 0, 2, one);
  CHECK_THROWS_AS(estimate_effective_channel_pilot(one, known, obs), RankDeficient);

  Eigen::MatrixXcd dependent = random_matrix(rng, 3, 2);
  dependent.row(1) = 2.0 * dependent.row(0);
  dependent.row(2) = -dependent.row(0);
  const auto obs3 = pilot_observations(d.channel, d.frame, 0, 2, dependent);
  CHECK_THROWS_AS(estimate_effective_channel_pilot(dependent, known, obs3), RankDeficient);
}

TEST_CASE("frame JSON dump") {
  const auto d = draw_frame(StiaScheme::point_c, 3, 9);
  std::ostringstream out;
  write_frame_json(out, d.frame);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["scheme"] == "pointC");
  CHECK(j["T"] == 3);
  CHECK(j["entries"].size() == 6);
  CHECK(j["entries"][0]["V"].size() == 4);
  CHECK(j["beta"].get<double>() == doctest::Approx(d.frame.beta));
}
