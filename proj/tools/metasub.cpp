// Copyright 2026 The Authors.
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

// metasub run | verify | counterexample
// Exit codes: 0 success, 1 verification failure, 2 config or data error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "metasub/bench.hpp"
#include "metasub/objectives.hpp"
#include "metasub/verify.hpp"

namespace {

constexpr int kVerifyFailed = 1;
constexpr int kBadInput = 2;

int print_checks(const std::vector<metasub::CheckResult>& checks) {
  bool ok = true;
  for (const auto& c : checks) {
    fmt::print("{} {}: {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
    ok = ok && c.passed;
  }
  return ok ? 0 : kVerifyFailed;
}

int run(const std::string& config_path, std::optional<std::uint64_t> seed,
        const std::string& out, const std::string& plot_dir, bool match,
        std::optional<std::size_t> threads) {
  metasub::ExperimentConfig config = metasub::load_config(config_path);
  if (seed) config.seeds = {*seed};
  if (!out.empty()) config.out = out;
  if (match) config.match_test_budget = true;
  if (threads) config.threads = *threads;

  const auto rows = metasub::run_experiment(config);
  if (config.out.empty()) {
    metasub::write_csv(std::cout, rows, config.timing);
  } else {
    std::ofstream file(config.out);
    if (!file) throw metasub::InputError("cannot write " + config.out);
    metasub::write_csv(file, rows, config.timing);
  }
  if (!plot_dir.empty()) metasub::write_plot_data(plot_dir, rows);
  return 0;
}

int counterexample() {
  const auto base = metasub::build_counterexample();
  const metasub::BestAugmentationObjective f(base, 1);
  fmt::print("{:<16} {:>8} {:>8}\n", "set", "f", "f'");
  std::vector<metasub::ElementSet> sets = {{}};
  for (std::size_t i = 0; i < base->size(); ++i) {
    sets.push_back({metasub::ElementId{i}});
  }
  sets.push_back({*base->find("ACDJ"), *base->find("IDEH")});
  for (const auto& s : sets) {
    std::string name;
    for (metasub::ElementId e : s) {
      name += (name.empty() ? "" : ",") + base->ground().label(e);
    }
    fmt::print("{:<16} {:>8} {:>8}\n", name.empty() ? "{}" : name,
               base->value_of(s.members()), f.value_of(s.members()));
  }
  return print_checks(metasub::run_verification("counterexample"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Submodular meta-learning experiments and checks"};
  app.require_subcommand(1);

  std::string config_path, out, plot_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  bool match = false;
  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment sweep");
  run_cmd->add_option("--config", config_path, "Config file")->required();
  run_cmd->add_option("--seed", seed, "Run a single seed");
  run_cmd->add_option("--out", out, "CSV output path");
  run_cmd->add_option("--emit-plot-data", plot_dir,
                      "Directory for per-method series files");
  run_cmd->add_flag("--match-test-budget", match,
                    "Set q = floor(n (k - l) / k) at every sweep point");
  run_cmd->add_option("--threads", threads, "Worker threads");

  std::string scope = "all";
  std::size_t instances = 100;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run property checks");
  verify_cmd->add_option("--scope", scope, "bounds, counterexample, oracle or all");
  verify_cmd->add_option("--instances", instances, "Random instances (oracle)");

  CLI::App* cx_cmd = app.add_subcommand(
      "counterexample", "Print the non-submodular augmentation example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kBadInput;
  }

  try {
    if (*run_cmd) {
      return run(config_path, seed, out, plot_dir, match, threads);
    }
    if (*verify_cmd) return print_checks(metasub::run_verification(scope, instances));
    if (*cx_cmd) return counterexample();
  } catch (const metasub::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kBadInput;
  } catch (const metasub::InputError& e) {
    fmt::print(stderr, "data error: {}\n", e.what());
    return kBadInput;
  } catch (const std::domain_error& e) {
    fmt::print(stderr, "invalid input: {}\n", e.what());
    return kBadInput;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kBadInput;
  }
  return 0;
}
