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

#ifndef STIA_REGIONS_HPP
#define STIA_REGIONS_HPP

#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "stia/rational.hpp"

namespace stia {

/// Closed-form sum-DoF curves.
enum class CurveKind {
  thm1,           // STIA inner bound vs feedback frequency omega, K users
  thm2,           // STIA/MAT trade-off vs feedback delay gamma, K users
  cor1,           // optimal 3-user trade-off vs gamma
  zf_tdma_omega,  // (K-2) omega + 1
  zf_tdma_gamma,  // 3 users: 2 - gamma
  zf_mat_gamma,   // 3 users: 2 - gamma/2
  lemma1_outer,   // 3 users: 9/4 - 3/4 min(gamma, 1)
  cutset,         // K-1
  finite_n,       // composite schedule with n STIA sets, gamma <= 1/K
};

enum class Variable { omega, gamma };

struct CurveSpec {
  CurveKind kind = CurveKind::thm1;
  int num_users = 3;
  /// STIA set count, finite_n only.
  int n = 1;
};

/// d(x) = slope x + intercept on [lo, hi]; hi empty means unbounded.
struct Segment {
  Rational lo;
  std::optional<Rational> hi;
  Rational slope;
  Rational intercept;

  bool contains(const Rational& x) const { return x >= lo && (!hi || x <= *hi); }
  Rational at(const Rational& x) const { return slope * x + intercept; }
};

struct RegionCurve {
  CurveSpec spec;
  Variable variable = Variable::omega;
  /// Contiguous, in increasing x.
  std::vector<Segment> segments;

  Rational domain_lo() const { return segments.front().lo; }
  std::optional<Rational> domain_hi() const { return segments.back().hi; }
  /// Segment endpoints, including the domain ends.
  std::vector<Rational> breakpoints() const;
};

/// a(K) = K(K-1)(K-2) / ((K-1)(K-2) + K).
Rational stia_slope(int num_users);
/// b(K) = K(K-1) / ((K-1)(K-2) + K).
Rational stia_intercept(int num_users);
/// c(K) = (K-1) / (1 + 1/2 + ... + 1/(K-1)).
Rational mat_dof(int num_users);

/// Throws InvalidArgument for K < 3 (and K != 3 for the 3-user curves).
RegionCurve region_curve(const CurveSpec& spec);

/// Exact value at x. Throws DomainError outside the domain.
Rational eval_curve(const RegionCurve& curve, const Rational& x);

/// Value from every segment containing x: two entries at an interior
/// breakpoint, one elsewhere.
std::vector<Rational> eval_sides(const RegionCurve& curve, const Rational& x);

/// Throws InvalidArgument unless segments are contiguous and continuous.
void validate_curve(const RegionCurve& curve);

/// ((K-1)Kn + (K-1)^3 + (K-1)) / (Kn + K(K-1)).
Rational finite_n_dof(int num_users, int n);

/// c / (8 f v) in seconds, c = 299 792 458 m/s.
double coherence_time(double carrier_hz, double speed_m_per_s);

std::string_view to_string(CurveKind kind);
/// Accepts the CLI names (thm1, thm2, cor1, zf_tdma_w, zf_tdma_g, zf_mat_g,
/// outer, cutset, finite_n) and the enum spellings.
CurveKind parse_curve_kind(std::string_view name);

/// Grid points lo, lo+step, ... <= hi merged with every breakpoint in range,
/// sorted and unique, paired with exact curve values.
std::vector<std::pair<Rational, Rational>> sample_curve(const RegionCurve& curve,
                                                        const Rational& step,
                                                        const Rational& x_max);

/// `x,d,x_exact,d_exact` rows: decimal values, then the exact fractions.
void write_curve_csv(std::ostream& out, const std::vector<std::pair<Rational, Rational>>& samples);

/// Exact segments and breakpoints as [numerator, denominator] pairs, plus the
/// samples as [x, d] decimals. A non-empty `generated` adds that key first.
void write_curve_json(std::ostream& out, const RegionCurve& curve,
                      const std::vector<std::pair<Rational, Rational>>& samples,
                      std::string_view generated = {});

}  // namespace stia

#endif  // STIA_REGIONS_HPP
