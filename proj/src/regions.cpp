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

#include "stia/regions.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "stia/errors.hpp"

namespace stia {

namespace {

using R = Rational;

void require_users(int k) {
  if (k < 3) throw InvalidArgument("region curves need K >= 3");
}

void require_three_users(const CurveSpec& spec) {
  if (spec.num_users != 3)
    throw InvalidArgument(std::string(to_string(spec.kind)) + " is defined for K = 3 only");
}

Segment seg(R lo, std::optional<R> hi, R slope, R intercept) {
  return {lo, hi, slope, intercept};
}

}  // namespace

std::vector<Rational> RegionCurve::breakpoints() const {
  std::vector<Rational> out;
  for (const auto& s : segments) {
    if (out.empty() || out.back() != s.lo) out.push_back(s.lo);
    if (s.hi) out.push_back(*s.hi);
  }
  return out;
}

Rational stia_slope(int k) {
  require_users(k);
  return R(k * (k - 1) * (k - 2), (k - 1) * (k - 2) + k);
}

Rational stia_intercept(int k) {
  require_users(k);
  return R(k * (k - 1), (k - 1) * (k - 2) + k);
}

Rational mat_dof(int k) {
  require_users(k);
  R harmonic(0);
  for (int i = 1; i <= k - 1; ++i) harmonic += R(1, i);
  return R(k - 1) / harmonic;
}

RegionCurve region_curve(const CurveSpec& spec) {
  const int k = spec.num_users;
  RegionCurve c;
  c.spec = spec;
  switch (spec.kind) {
    case CurveKind::thm1: {
      require_users(k);
      c.variable = Variable::omega;
      const R b1(k - 2, 2 * k - 2);
      const R b2(k - 1, k);
      c.segments = {seg(0, b1, k - 1, 1), seg(b1, b2, stia_slope(k), stia_intercept(k)),
                    seg(b2, R(1), 0, k - 1)};
      break;
    }
    case CurveKind::thm2: {
      require_users(k);
      c.variable = Variable::gamma;
      const R ck = mat_dof(k);
      const R km1(k - 1);
      c.segments = {seg(0, R(1, k), 0, km1),
                    seg(R(1, k), R(1), R(-k) + R(k) * ck / km1, R(k) - ck / km1),
                    seg(1, std::nullopt, 0, ck)};
      break;
    }
    case CurveKind::cor1:
      require_three_users(spec);
      c.variable = Variable::gamma;
      c.segments = {seg(0, R(1, 3), 0, 2), seg(R(1, 3), R(1), R(-3, 4), R(9, 4)),
                    seg(1, std::nullopt, 0, R(3, 2))};
      break;
    case CurveKind::zf_tdma_omega:
      require_users(k);
      c.variable = Variable::omega;
      c.segments = {seg(0, R(1), k - 2, 1)};
      break;
    case CurveKind::zf_tdma_gamma:
      require_three_users(spec);
      c.variable = Variable::gamma;
      c.segments = {seg(0, R(1), -1, 2)};
      break;
    case CurveKind::zf_mat_gamma:
      require_three_users(spec);
      c.variable = Variable::gamma;
      c.segments = {seg(0, R(1), R(-1, 2), 2)};
      break;
    case CurveKind::lemma1_outer:
      require_three_users(spec);
      c.variable = Variable::gamma;
      // Perfect-CSIT fraction alpha = 1 - gamma, floored at zero.
      c.segments = {seg(0, R(1), R(-3, 4), R(9, 4)), seg(1, std::nullopt, 0, R(3, 2))};
      break;
    case CurveKind::cutset:
      require_users(k);
      c.variable = Variable::omega;
      c.segments = {seg(0, R(1), 0, k - 1)};
      break;
    case CurveKind::finite_n:
      require_users(k);
      if (spec.n < 1) throw InvalidArgument("finite_n curve needs n >= 1");
      c.variable = Variable::gamma;
      c.segments = {seg(0, R(1, k), 0, finite_n_dof(k, spec.n))};
      break;
    default:
      throw InvalidArgument("region_curve: unknown curve kind");
  }
  validate_curve(c);
  return c;
}

std::vector<Rational> eval_sides(const RegionCurve& curve, const Rational& x) {
  std::vector<Rational> out;
  for (const auto& s : curve.segments)
    if (s.contains(x)) out.push_back(s.at(x));
  return out;
}

Rational eval_curve(const RegionCurve& curve, const Rational& x) {
  for (const auto& s : curve.segments)
    if (s.contains(x)) return s.at(x);
  throw DomainError("eval_curve: " + to_string(x) + " is outside the curve domain");
}

void validate_curve(const RegionCurve& curve) {
  if (curve.segments.empty()) throw InvalidArgument("curve has no segments");
  for (std::size_t i = 0; i < curve.segments.size(); ++i) {
    const auto& s = curve.segments[i];
    if (s.hi && *s.hi < s.lo) throw InvalidArgument("curve segment has hi < lo");
    if (i + 1 == curve.segments.size()) break;
    const auto& next = curve.segments[i + 1];
    if (!s.hi || *s.hi != next.lo) throw InvalidArgument("curve segments are not contiguous");
    if (s.at(*s.hi) != next.at(next.lo)) throw InvalidArgument("curve is discontinuous");
  }
}

Rational finite_n_dof(int k, int n) {
  require_users(k);
  if (n < 1) throw InvalidArgument("finite_n_dof: n >= 1");
  const std::int64_t km1 = k - 1;
  return R(km1 * k * n + km1 * km1 * km1 + km1, static_cast<std::int64_t>(k) * n + k * km1);
}

double coherence_time(double carrier_hz, double speed_m_per_s) {
  if (!(carrier_hz > 0.0) || !(speed_m_per_s > 0.0))
    throw InvalidArgument("coherence_time: inputs must be positive");
  constexpr double kSpeedOfLight = 299792458.0;
  return kSpeedOfLight / (8.0 * carrier_hz * speed_m_per_s);
}

std::string_view to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::thm1: return "thm1";
    case CurveKind::thm2: return "thm2";
    case CurveKind::cor1: return "cor1";
    case CurveKind::zf_tdma_omega: return "zf_tdma_w";
    case CurveKind::zf_tdma_gamma: return "zf_tdma_g";
    case CurveKind::zf_mat_gamma: return "zf_mat_g";
    case CurveKind::lemma1_outer: return "outer";
    case CurveKind::cutset: return "cutset";
    case CurveKind::finite_n: return "finite_n";
  }
  return "unknown";
}

CurveKind parse_curve_kind(std::string_view name) {
  struct Alias {
    std::string_view name;
    CurveKind kind;
  };
  static constexpr Alias kAliases[] = {
      {"thm1", CurveKind::thm1},
      {"thm2", CurveKind::thm2},
      {"cor1", CurveKind::cor1},
      {"zf_tdma_w", CurveKind::zf_tdma_omega},
      {"zf_tdma_omega", CurveKind::zf_tdma_omega},
      {"zf_tdma_g", CurveKind::zf_tdma_gamma},
      {"zf_tdma_gamma", CurveKind::zf_tdma_gamma},
      {"zf_mat_g", CurveKind::zf_mat_gamma},
      {"zf_mat_gamma", CurveKind::zf_mat_gamma},
      {"outer", CurveKind::lemma1_outer},
      {"lemma1_outer", CurveKind::lemma1_outer},
      {"cutset", CurveKind::cutset},
      {"finite_n", CurveKind::finite_n},
  };
  for (const auto& a : kAliases)
    if (a.name == name) return a.kind;
  throw InvalidArgument("unknown curve '" + std::string(name) + "'");
}

std::vector<std::pair<Rational, Rational>> sample_curve(const RegionCurve& curve,
                                                        const Rational& step,
                                                        const Rational& x_max) {
  if (step <= 0) throw InvalidArgument("sample_curve: grid step must be positive");
  const R lo = curve.domain_lo();
  R hi = x_max;
  if (auto dhi = curve.domain_hi(); dhi && *dhi < hi) hi = *dhi;
  if (hi < lo) throw DomainError("sample_curve: x_max below the curve domain");

  std::vector<R> xs;
  for (R x = lo; x <= hi; x += step) xs.push_back(x);
  for (const auto& b : curve.breakpoints())
    if (b >= lo && b <= hi) xs.push_back(b);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<std::pair<R, R>> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.emplace_back(x, eval_curve(curve, x));
  return out;
}

void write_curve_csv(std::ostream& out, const std::vector<std::pair<Rational, Rational>>& samples) {
  out << "x,d,x_exact,d_exact\n";
  char buf[64];
  for (const auto& [x, d] : samples) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,", to_double(x), to_double(d));
    out << buf << to_string(x) << ',' << to_string(d) << '\n';
  }
}

void write_curve_json(std::ostream& out, const RegionCurve& curve,
                      const std::vector<std::pair<Rational, Rational>>& samples,
                      std::string_view generated) {
  using json = nlohmann::ordered_json;
  auto frac = [](const R& r) { return json::array({r.numerator(), r.denominator()}); };
  json doc;
  if (!generated.empty()) doc["generated"] = generated;
  doc["curve"] = std::string(to_string(curve.spec.kind));
  doc["K"] = curve.spec.num_users;
  if (curve.spec.kind == CurveKind::finite_n) doc["n"] = curve.spec.n;
  doc["variable"] = curve.variable == Variable::omega ? "omega" : "gamma";
  auto& segs = doc["segments"] = json::array();
  for (const auto& s : curve.segments)
    segs.push_back({{"lo", frac(s.lo)},
                    {"hi", s.hi ? frac(*s.hi) : json(nullptr)},
                    {"slope", frac(s.slope)},
                    {"intercept", frac(s.intercept)}});
  auto& bps = doc["breakpoints"] = json::array();
  for (const auto& x : curve.breakpoints()) bps.push_back({{"x", frac(x)}, {"d", frac(eval_curve(curve, x))}});
  auto& rows = doc["samples"] = json::array();
  for (const auto& [x, d] : samples) rows.push_back({to_double(x), to_double(d)});
  out << doc.dump(2) << '\n';
}

}  // namespace stia
