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

#include <doctest.h>

#include "stia/errors.hpp"
#include "stia/feedback.hpp"

using namespace stia;

namespace {

FadingSpec fast(int k = 3) { return FadingSpec::standard(k, FadingModel::iid_fast(), 0); }
FadingSpec block(int tc, int k = 3) { return FadingSpec::standard(k, FadingModel::block(tc), 0); }

}  // namespace

TEST_CASE("normalized parameters are exact") {
  CHECK(normalized_parameter(FeedbackModel1{1, 2}) == Rational(2, 3));
  CHECK(normalized_parameter(FeedbackModel1{3, 1}) == Rational(1, 4));
  CHECK(normalized_parameter(FeedbackModel2{1, 3}) == Rational(1, 3));
  CHECK(normalized_parameter(FeedbackModel2{0, 5}) == Rational(0));
  CHECK_THROWS_AS(normalized_parameter(FeedbackModel1{0, 0}), InvalidArgument);
  CHECK_THROWS_AS(normalized_parameter(FeedbackModel2{-1, 3}), InvalidArgument);
}

TEST_CASE("model 1: first cycle of T_n = 1, T_f = 2") {
  const FeedbackModel m = FeedbackModel1{1, 2};
  const auto v1 = csit_available(m, fast(), 1);
  CHECK(v1.known.empty());
  CHECK_FALSE(v1.has_current[0]);

  const auto v2 = csit_available(m, fast(), 2);
  for (int k = 0; k < 3; ++k) {
    CHECK(v2.knows(k, 1));
    CHECK(v2.knows(k, 2));
    CHECK(v2.has_current[k]);
  }
  CHECK(csit_available(m, fast(), 3).knows_all(3, 3));
}

TEST_CASE("model 1: outdated slots arrive with the first feedback slot") {
  const FeedbackModel m = FeedbackModel1{3, 1};
  for (int tx = 1; tx <= 3; ++tx) CHECK(csit_available(m, fast(), tx).known.empty());
  const auto v = csit_available(m, fast(), 4);
  for (int s = 1; s <= 4; ++s) CHECK(v.knows_all(3, s));
  // Next cycle: earlier cycle stays known, current slot does not.
  const auto v5 = csit_available(m, fast(), 5);
  CHECK(v5.knows_all(3, 4));
  CHECK_FALSE(v5.knows(0, 5));
}

TEST_CASE("model 1 extremes") {
  const FeedbackModel full = FeedbackModel1{0, 1};
  const FeedbackModel none = FeedbackModel1{2, 0};
  for (int tx = 1; tx <= 10; ++tx) {
    const auto v = csit_available(full, fast(), tx);
    for (bool c : v.has_current) CHECK(c);
    CHECK(csit_available(none, fast(), tx).known.empty());
  }
}

TEST_CASE("views are causal and monotone") {
  const std::vector<FeedbackModel> models{FeedbackModel1{1, 2}, FeedbackModel1{2, 3},
                                          FeedbackModel1{4, 1}, FeedbackModel1{0, 2}};
  for (const auto& m : models) {
    for (int origin : {1, 3}) {
      CsitView prev;
      for (int tx = origin; tx <= origin + 20; ++tx) {
        const auto v = csit_available(m, fast(), tx, origin);
        for (const auto& [u, s] : v.known) CHECK(s <= tx);
        for (int u = 0; u < 3; ++u) CHECK(v.has_current[u] == v.knows(u, tx));
        if (tx > origin)
          for (const auto& e : prev.known) CHECK(v.known.contains(e));
        prev = v;
      }
    }
  }
  for (int tfb : {0, 1, 2, 4}) {
    const FeedbackModel m = FeedbackModel2{tfb, 3};
    CsitView prev;
    for (int tx = 1; tx <= 15; ++tx) {
      const auto v = csit_available(m, block(3), tx);
      for (const auto& [u, s] : v.known) CHECK(s <= tx);
      for (int u = 0; u < 3; ++u) CHECK(v.has_current[u] == v.knows(u, tx));
      for (const auto& e : prev.known) CHECK(v.known.contains(e));
      prev = v;
    }
  }
}

TEST_CASE("model 2: one-slot delay gives current CSI from the second slot of a block") {
  const FeedbackModel m = FeedbackModel2{1, 3};
  const auto spec = block(3);
  // Block 2 covers slots 4..6.
  const auto first = csit_available(m, spec, 4);
  CHECK_FALSE(first.has_current[0]);
  CHECK(first.knows_all(3, 3));
  CHECK_FALSE(first.knows(0, 4));
  for (int tx : {5, 6}) {
    const auto v = csit_available(m, spec, tx);
    CHECK(v.knows_all(3, tx));
    CHECK(v.knows_all(3, 4));
  }
}

TEST_CASE("model 2: delay longer than the block only gives prior blocks") {
  const FeedbackModel m = FeedbackModel2{4, 3};
  const auto spec = block(3);
  CHECK(csit_available(m, spec, 4).known.empty());
  const auto v = csit_available(m, spec, 6);
  CHECK(v.knows_all(3, 3));
  CHECK_FALSE(v.knows(0, 4));
  const auto w = csit_available(m, spec, 7);
  CHECK(w.knows_all(3, 3));
  CHECK_FALSE(w.knows(0, 4));
  CHECK(csit_available(m, spec, 8).knows_all(3, 6));
}

TEST_CASE("model and fading must match") {
  CHECK_THROWS_AS(csit_available(FeedbackModel1{1, 2}, block(3), 1), CsitError);
  CHECK_THROWS_AS(csit_available(FeedbackModel2{1, 3}, fast(), 1), CsitError);
  CHECK_THROWS_AS(csit_available(FeedbackModel2{1, 3}, block(4), 1), CsitError);
}
