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

#include "stia/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "stia/baselines.hpp"
#include "stia/errors.hpp"

namespace stia {

namespace {

struct SchemeName {
  Scheme scheme;
  std::string_view name;
};

constexpr SchemeName kSchemeNames[] = {
    {Scheme::tdma, "tdma"},       {Scheme::zf, "zf"},         {Scheme::mat2, "mat2"},
    {Scheme::point_b, "pointB"},  {Scheme::point_c, "pointC"}, {Scheme::ls, "ls"},
    {Scheme::timeshare, "timeshare"},
};

bool is_stia(Scheme s) { return s == Scheme::point_b || s == Scheme::point_c || s == Scheme::ls; }

StiaScheme stia_scheme(Scheme s) {
  return s == Scheme::point_b ? StiaScheme::point_b : StiaScheme::point_c;
}

// One CSI lookup a frame makes: at frame slot tx, the channel of user at
// frame slot `slot`. Slots are relative to the frame start.
struct CsiNeed {
  int tx;
  int user;
  int slot;
};

struct FrameNeeds {
  int length = 1;
  std::vector<CsiNeed> needs;
};

FrameNeeds frame_needs(Scheme scheme, int k) {
  FrameNeeds f;
  auto need_all = [&](int tx, int slot) {
    for (int u = 0; u < k; ++u) f.needs.push_back({tx, u, slot});
  };
  switch (scheme) {
    case Scheme::tdma:
      break;
    case Scheme::zf:
      need_all(1, 1);
      break;
    case Scheme::mat2:
      f.length = 3;
      f.needs = {{3, 1, 1}, {3, 0, 2}};
      break;
    case Scheme::point_c:
    case Scheme::ls:
      f.length = k;
      for (int n = 2; n <= k; ++n) {
        need_all(n, n);
        need_all(n, 1);
      }
      break;
    case Scheme::point_b:
      f.length = 2 * k - 2;
      for (int n = k + 1; n <= f.length; ++n) {
        need_all(n, n);
        for (int r = 1; r <= k; ++r) need_all(n, r);
      }
      break;
    case Scheme::timeshare:
      break;
  }
  return f;
}

Rational omega_threshold(Scheme scheme, int k) {
  switch (scheme) {
    case Scheme::point_c:
    case Scheme::ls:
      return Rational(k - 1, k);
    case Scheme::point_b:
      return Rational(k - 2, 2 * k - 2);
    case Scheme::zf:
      return Rational(1);
    default:
      return Rational(0);
  }
}

bool placement_exists(const FeedbackModel& model, const FadingSpec& spec, const FrameNeeds& f,
                      int period) {
  for (int origin = 1; origin <= period; ++origin) {
    bool ok = true;
    for (const auto& need : f.needs) {
      const auto view = csit_available(model, spec, origin + need.tx - 1);
      if (!view.knows(need.user, origin + need.slot - 1)) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

FadingSpec trial_spec(const SchemeConfig& config, std::uint64_t key) {
  const int k = config.num_users;
  FadingSpec spec;
  spec.num_users = k;
  spec.num_tx_antennas = config.antennas();
  spec.model = config.scheme == Scheme::timeshare ? FadingModel::block(k) : FadingModel::iid_fast();
  spec.h_min = config.h_min;
  spec.h_max = config.h_max;
  spec.seed = key;
  return spec;
}

double trial_rate(const SchemeConfig& config, const ChannelTensor& channel, double power) {
  const int k = config.num_users;
  switch (config.scheme) {
    case Scheme::tdma: {
      double bits = 0.0;
      for (int s = 1; s <= k; ++s) bits += tdma_frame(channel, s, power, false).rate;
      return bits / k;
    }
    case Scheme::zf: {
      double bits = 0.0;
      for (int s = 1; s <= k; ++s) bits += zf_frame(channel, s, power).bits();
      return bits / k;
    }
    case Scheme::mat2: {
      const Mat2Frame frame = mat2_frame(channel, 0, 1, power);
      const std::vector<UserLink> links{
          {frame.effective[0].matrix, frame.plans[0].noise_cov},
          {frame.effective[1].matrix, frame.plans[1].noise_cov},
      };
      return sum_rate(links, frame.symbol_power, 3);
    }
    case Scheme::point_b:
    case Scheme::point_c:
    case Scheme::ls: {
      const auto rule =
          config.scheme == Scheme::ls ? PrecoderRule::least_squares : PrecoderRule::aligned;
      const PrecoderSet frame = build_frame(stia_scheme(config.scheme), channel, power, rule);
      const auto links = stia_links(channel, frame);
      return sum_rate(links, frame.symbol_power, frame.frame_len);
    }
    case Scheme::timeshare:
      return timeshare_frame(k, config.timeshare_sets, channel, power).sum_rate();
  }
  return 0.0;
}

void validate_config(const SchemeConfig& config) {
  const int k = config.num_users;
  if (k < 3) throw InvalidArgument("scheme config: need K >= 3");
  const int nt = config.antennas();
  if (nt < 1 || nt > k - 1) throw InvalidArgument("scheme config: need 1 <= N_t <= K-1");
  if (nt != k - 1 && config.scheme != Scheme::ls)
    throw InvalidArgument("scheme config: only ls accepts N_t < K-1");
  if (config.scheme == Scheme::mat2 && nt < 2)
    throw InvalidArgument("scheme config: mat2 needs N_t >= 2");
  if (config.scheme == Scheme::timeshare && config.timeshare_sets < 1)
    throw InvalidArgument("scheme config: timeshare needs n >= 1");
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  for (const auto& e : kSchemeNames)
    if (e.scheme == scheme) return e.name;
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (const auto& e : kSchemeNames)
    if (e.name == name) return e.scheme;
  throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
}

int trial_slots(const SchemeConfig& config) {
  const int k = config.num_users;
  switch (config.scheme) {
    case Scheme::tdma:
    case Scheme::zf:
    case Scheme::point_c:
    case Scheme::ls:
      return k;
    case Scheme::mat2:
      return 3;
    case Scheme::point_b:
      return 2 * k - 2;
    case Scheme::timeshare:
      return k * (config.timeshare_sets + k - 1);
  }
  return k;
}

void check_feasible(const SchemeConfig& config) {
  validate_config(config);
  if (!config.feedback) return;
  const FeedbackModel& model = *config.feedback;
  const int k = config.num_users;
  const Rational param = normalized_parameter(model);

  if (config.scheme == Scheme::timeshare) {
    const auto* m2 = std::get_if<FeedbackModel2>(&model);
    if (!m2 || m2->delay_slots != 1 || m2->coherence_slots != k)
      throw CsitError("timeshare runs at T_fb = 1, T_c = K under the delay-limited model");
    return;
  }

  FadingSpec spec = trial_spec(config, 0);
  int period = 1;
  if (const auto* m1 = std::get_if<FeedbackModel1>(&model)) {
    if (param < omega_threshold(config.scheme, k))
      throw CsitError(std::string(to_string(config.scheme)) + " needs feedback fraction >= " +
                      to_string(omega_threshold(config.scheme, k)) + ", got " +
                      to_string(param));
    period = m1->cycle_length();
  } else {
    if (is_stia(config.scheme))
      throw CsitError("STIA frames need fast fading; the delay-limited model is block fading");
    const auto& m2 = std::get<FeedbackModel2>(model);
    spec.model = FadingModel::block(m2.coherence_slots);
    period = m2.coherence_slots;
  }
  if (!placement_exists(model, spec, frame_needs(config.scheme, k), period))
    throw CsitError(std::string(to_string(config.scheme)) +
                    ": no frame placement finds the CSI it needs");
}

std::vector<UserLink> stia_links(const ChannelTensor& channel, const PrecoderSet& frame) {
  std::vector<UserLink> links;
  const auto plans = combining_plans(frame.scheme, frame.num_users, frame.beta);
  for (const auto& plan : plans) {
    UserLink link{effective_channel(channel, frame, plan.user).matrix, plan.noise_cov};
    for (int j = 0; j < frame.num_users; ++j) {
      if (j == plan.user) continue;
      const Eigen::MatrixXcd leak = combined_map(channel, frame, plan, j);
      link.noise_cov += frame.symbol_power * leak * leak.adjoint();
    }
    links.push_back(std::move(link));
  }
  return links;
}

TrialResult run_trial(const SchemeConfig& config, double snr_linear, std::uint64_t trial_key) {
  validate_config(config);
  if (!(snr_linear > 0.0)) throw InvalidArgument("run_trial: SNR must be positive");
  const FadingSpec spec = trial_spec(config, trial_key);
  const int slots = trial_slots(config);
  TrialResult result;
  for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
    const ChannelTensor channel = sample_channel(spec, slots, static_cast<std::uint64_t>(attempt));
    try {
      result.sum_rate = trial_rate(config, channel, snr_linear);
      return result;
    } catch (const IllConditioned&) {
    } catch (const SingularMatrix&) {
    } catch (const RankDeficient&) {
    }
    ++result.resamples;
  }
  throw SamplingError("run_trial: resample cap exceeded");
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

DofEstimate estimate_dof(const SchemeConfig& config, std::span<const double> snr_grid_db,
                         int trials, std::uint64_t seed, int workers) {
  check_feasible(config);
  if (snr_grid_db.size() < 3) throw InvalidArgument("estimate_dof: need at least 3 SNR points");
  for (std::size_t i = 0; i < snr_grid_db.size(); ++i) {
    if (!(snr_grid_db[i] >= 30.0 && snr_grid_db[i] <= 100.0))
      throw InvalidArgument("estimate_dof: SNR grid must lie in [30, 100] dB");
    if (i > 0 && !(snr_grid_db[i] > snr_grid_db[i - 1]))
      throw InvalidArgument("estimate_dof: SNR grid must be strictly increasing");
  }
  if (trials < 100) throw InvalidArgument("estimate_dof: need at least 100 trials");

  const std::size_t points = snr_grid_db.size();
  const std::size_t total = points * static_cast<std::size_t>(trials);
  std::vector<double> rates(total);
  std::vector<int> resamples(total);

  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), total));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const std::size_t p = i / static_cast<std::size_t>(trials);
      const std::size_t t = i % static_cast<std::size_t>(trials);
      try {
        const double snr = std::pow(10.0, snr_grid_db[p] / 10.0);
        // Common random numbers: trial t sees the same channel at every SNR.
        const auto key = stream_key({seed, static_cast<std::uint64_t>(config.scheme), t});
        const TrialResult r = run_trial(config, snr, key);
        rates[i] = r.sum_rate;
        resamples[i] = r.resamples;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  DofEstimate est;
  est.scheme = config.scheme;
  est.num_users = config.num_users;
  est.snr_grid_db.assign(snr_grid_db.begin(), snr_grid_db.end());
  est.trials = trials;
  est.seed = seed;
  est.resamples = std::accumulate(resamples.begin(), resamples.end(), std::int64_t{0});
  std::vector<double> x;
  for (std::size_t p = 0; p < points; ++p) {
    const std::span<const double> block(rates.data() + p * trials, static_cast<std::size_t>(trials));
    est.mean_sum_rate.push_back(pairwise_sum(block) / trials);
    x.push_back(snr_grid_db[p] / 10.0 * std::log2(10.0));
  }

  const double n = static_cast<double>(points);
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(est.mean_sum_rate.begin(), est.mean_sum_rate.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t p = 0; p < points; ++p) {
    sxy += (x[p] - mx) * (est.mean_sum_rate[p] - my);
    sxx += (x[p] - mx) * (x[p] - mx);
  }
  est.slope = sxy / sxx;
  est.intercept = my - est.slope * mx;
  for (std::size_t p = 0; p < points; ++p)
    est.fit_residual = std::max(
        est.fit_residual, std::abs(est.mean_sum_rate[p] - (est.slope * x[p] + est.intercept)));
  return est;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void write_results_csv(std::ostream& out, const DofEstimate& estimate) {
  out << "scheme,K,snr_db,mean_rate,trials,seed\n";
  for (std::size_t p = 0; p < estimate.snr_grid_db.size(); ++p)
    out << to_string(estimate.scheme) << ',' << estimate.num_users << ','
        << format_double(estimate.snr_grid_db[p]) << ','
        << format_double(estimate.mean_sum_rate[p]) << ',' << estimate.trials << ','
        << estimate.seed << '\n';
}

void write_estimate_json(std::ostream& out, const DofEstimate& estimate,
                         std::string_view generated) {
  nlohmann::ordered_json j;
  if (!generated.empty()) j["generated"] = generated;
  j["scheme"] = to_string(estimate.scheme);
  j["K"] = estimate.num_users;
  j["snr_grid_db"] = estimate.snr_grid_db;
  j["mean_sum_rate"] = estimate.mean_sum_rate;
  j["slope"] = estimate.slope;
  j["intercept"] = estimate.intercept;
  j["fit_residual"] = estimate.fit_residual;
  j["trials"] = estimate.trials;
  j["seed"] = estimate.seed;
  j["resamples"] = estimate.resamples;
  out << j.dump(2) << '\n';
}

}  // namespace stia
