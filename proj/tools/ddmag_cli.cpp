// Copyright 2026 The ddmag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: simulate | estimate | sensitivity | noise-sweep |
// oracle | validate.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ddmag/config.hpp"
#include "ddmag/scenarios.hpp"
#include "ddmag/validation.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kRuntime = 3 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  unsigned threads = 1;
};

void add_common(CLI::App* sub, Common& c, bool needs_config) {
  auto* opt = sub->add_option("--config", c.config, "configuration file (key = value)");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "master seed; overrides the config");
  sub->add_option("--out", c.out, "output directory")->capture_default_str();
  sub->add_option("--threads", c.threads, "worker threads (speed only)")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
}

void print_summary(const ddmag::ScenarioResult& r) {
  r.summary.write(std::cout);
  for (const auto& f : r.files) std::cout << "wrote " << f << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DC magnetometry with a collective spin under dynamical decoupling"};
  app.require_subcommand(1);
  Common c;
  auto* simulate = app.add_subcommand("simulate", "ensemble time series (timeseries.csv)");
  auto* estimate = app.add_subcommand("estimate", "phase relay estimate of b0 (estimate.txt)");
  auto* sensitivity = app.add_subcommand("sensitivity", "sensitivity vs time (sensitivity.csv)");
  auto* sweep = app.add_subcommand("noise-sweep", "optimal sensitivity vs bc (sweep.csv)");
  auto* oracle = app.add_subcommand("oracle", "closed-form dephasing curves (oracle.csv)");
  auto* validate = app.add_subcommand("validate", "built-in invariant suite");
  for (auto* s : {simulate, estimate, sensitivity, sweep, oracle}) add_common(s, c, true);
  add_common(validate, c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  ddmag::ScenarioOptions opt{c.out, c.threads};
  try {
    if (validate->parsed()) {
      const auto r = ddmag::run_validate(opt);
      print_summary(r);
      return r.failures.empty() ? kOk : kValidation;
    }
    ddmag::RunConfig cfg;
    try {
      cfg = ddmag::load_config(c.config);
      if (c.seed) cfg.seed = *c.seed;
    } catch (const ddmag::ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kUsage;
    }
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
    ddmag::ScenarioResult r;
    if (simulate->parsed()) r = ddmag::run_simulate(cfg, opt);
    if (estimate->parsed()) r = ddmag::run_estimate(cfg, opt);
    if (sensitivity->parsed()) r = ddmag::run_sensitivity(cfg, opt);
    if (sweep->parsed()) r = ddmag::run_noise_sweep(cfg, opt);
    if (oracle->parsed()) r = ddmag::run_oracle(cfg, opt);
    print_summary(r);
    return kOk;
  } catch (const ddmag::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntime;
  }
}
