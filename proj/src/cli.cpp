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

#include "stia/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stia/errors.hpp"
#include "stia/montecarlo.hpp"
#include "stia/regions.hpp"
#include "stia/verify.hpp"

namespace stia {

namespace {

struct ExperimentConfig {
  int num_users = 3;
  int num_tx_antennas = 0;
  std::string scheme = "pointC";
  std::string curve = "thm1";
  std::optional<int> t_n, t_f, t_fb, t_c;
  std::vector<double> snr_db{40, 50, 60, 70, 80};
  int trials = 1000;
  std::uint64_t seed = 1;
  std::string out_path;
  std::optional<std::string> format;
  std::string grid = "0.01";
  std::optional<std::string> x_max;
  std::optional<int> n;
  int workers = 0;
  bool no_timestamp = false;
  std::string suite = "all";
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<FeedbackModel> feedback_model(const ExperimentConfig& c) {
  const bool m1 = c.t_n || c.t_f;
  const bool m2 = c.t_fb || c.t_c;
  if (m1 && m2) throw InvalidArgument("give either --Tn/--Tf or --Tfb/--Tc, not both");
  if (m1) {
    if (!c.t_n || !c.t_f) throw InvalidArgument("--Tn and --Tf go together");
    FeedbackModel1 m{*c.t_n, *c.t_f};
    m.validate();
    return m;
  }
  if (m2) {
    if (!c.t_fb || !c.t_c) throw InvalidArgument("--Tfb and --Tc go together");
    FeedbackModel2 m{*c.t_fb, *c.t_c};
    m.validate();
    return m;
  }
  return std::nullopt;
}

std::string output_format(const ExperimentConfig& c, const char* fallback) {
  const std::string f = c.format.value_or(fallback);
  if (f != "csv" && f != "json") throw InvalidArgument("--format must be csv or json");
  return f;
}

// Renders into a buffer so a failing command leaves no partial file.
void emit(const ExperimentConfig& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.out_path, std::ios::binary);
  if (!file) throw InvalidArgument("cannot open --out path '" + c.out_path + "'");
  file << text;
}

int cmd_region(const ExperimentConfig& c, std::ostream& out) {
  CurveSpec spec{parse_curve_kind(c.curve), c.num_users, c.n.value_or(1)};
  const RegionCurve curve = region_curve(spec);
  const Rational step = parse_rational(c.grid);
  Rational x_max = c.x_max ? parse_rational(*c.x_max) : Rational(curve.variable == Variable::omega ? 1 : 2);
  const auto samples = sample_curve(curve, step, x_max);

  std::ostringstream text;
  const std::string stamp = c.no_timestamp ? "" : utc_timestamp();
  if (output_format(c, "csv") == "csv") {
    if (!stamp.empty()) text << "# generated " << stamp << '\n';
    write_curve_csv(text, samples);
  } else {
    write_curve_json(text, curve, samples, stamp);
  }
  emit(c, text.str(), out);
  return kExitOk;
}

int cmd_simulate(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  SchemeConfig config;
  config.scheme = parse_scheme(c.scheme);
  config.num_users = c.num_users;
  config.num_tx_antennas = c.num_tx_antennas;
  config.timeshare_sets = c.n.value_or(20);
  config.feedback = feedback_model(c);
  check_feasible(config);

  const auto est = estimate_dof(config, c.snr_db, c.trials, c.seed, c.workers);
  std::ostringstream text;
  const std::string stamp = c.no_timestamp ? "" : utc_timestamp();
  if (output_format(c, "json") == "csv") {
    if (!stamp.empty()) text << "# generated " << stamp << '\n';
    write_results_csv(text, est);
  } else {
    write_estimate_json(text, est, stamp);
  }
  emit(c, text.str(), out);
  err << to_string(est.scheme) << " K=" << est.num_users << ": slope " << est.slope
      << ", fit residual " << est.fit_residual << ", resamples " << est.resamples << '\n';
  return kExitOk;
}

int cmd_verify(const ExperimentConfig& c, std::ostream& out) {
  VerifyOptions options;
  options.seed = c.seed;
  options.partition_users = c.num_users;
  options.partition_sets = c.n.value_or(3);
  std::ostringstream text;
  const auto results = run_verify_suite(c.suite, options, text);
  print_check_table(text, results);
  emit(c, text.str(), out);
  for (const auto& r : results)
    if (!r.passed) return kExitFailed;
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  ExperimentConfig c;
  CLI::App app{"Space-time interference alignment simulator", "stiasim"};
  app.set_config("--config", "", "Read options from a `key = value` file; flags override it");
  app.require_subcommand(1);

  app.add_option("--K", c.num_users, "Number of users (N_t = K-1)")->check(CLI::Range(3, 64));
  app.add_option("--Nt", c.num_tx_antennas, "Transmit antennas for ls (default K-1)");
  app.add_option("--scheme", c.scheme, "tdma, zf, mat2, pointB, pointC, ls or timeshare");
  app.add_option("--curve", c.curve,
                 "thm1, thm2, cor1, zf_tdma_w, zf_tdma_g, zf_mat_g, outer, cutset or finite_n");
  app.add_option("--Tn", c.t_n, "Model 1: slots without feedback per cycle");
  app.add_option("--Tf", c.t_f, "Model 1: slots with feedback per cycle");
  app.add_option("--Tfb", c.t_fb, "Model 2: feedback delay in slots");
  app.add_option("--Tc", c.t_c, "Model 2: coherence time in slots");
  app.add_option("--snr", c.snr_db, "SNR grid in dB")->delimiter(',');
  app.add_option("--trials", c.trials, "Trials per SNR point");
  app.add_option("--seed", c.seed, "Master seed");
  app.add_option("--out", c.out_path, "Output file (default stdout)");
  app.add_option("--format", c.format, "csv or json");
  app.add_option("--grid", c.grid, "Region sampling step, e.g. 0.01 or 1/64");
  app.add_option("--xmax", c.x_max, "Region sampling upper end");
  app.add_option("--n", c.n, "STIA set count (timeshare, finite_n, partition)");
  app.add_option("--workers", c.workers, "Worker threads (0 = all cores)");
  app.add_flag("--no-timestamp", c.no_timestamp, "Omit the generation timestamp");
  app.add_option("--suite", c.suite, "alignment, partition, decode, regions or all");

  auto* region = app.add_subcommand("region", "Sample a closed-form DoF curve")->fallthrough();
  auto* simulate = app.add_subcommand("simulate", "Estimate a scheme's DoF by Monte Carlo")->fallthrough();
  auto* verify = app.add_subcommand("verify", "Run the invariant suites")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (region->parsed()) return cmd_region(c, out);
    if (simulate->parsed()) return cmd_simulate(c, out, err);
    if (verify->parsed()) return cmd_verify(c, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CsitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}

}  // namespace stia
