// Copyright 2026 The cvlattice Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cvlattice <experiment> [--config path] [key=value ...]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 1 anything else (I/O, oracle failures).

#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "cvlattice/config.hpp"
#include "cvlattice/experiments.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-time lattice scalar field simulation on qumodes"};
  std::string experiment;
  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("experiment", experiment,
                 "single-qumode | propagator | scattering | "
                 "degenerate-check | oracle-compare")
      ->required();
  app.add_option("--config,-c", config_path, "TOML configuration file");
  app.add_option("overrides", overrides, "key=value overrides");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  cvlattice::ExperimentConfig config;
  try {
    const cvlattice::Experiment kind = cvlattice::parse_experiment(experiment);
    config = config_path.empty() ? cvlattice::default_config(kind)
                                 : cvlattice::load_config(config_path, kind);
    for (const std::string& o : overrides) {
      cvlattice::apply_override(config, o);
    }
    cvlattice::validate_config(config);
  } catch (const cvlattice::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  }
  if (config.threads > 0) Eigen::setNbThreads(config.threads);

  const auto start = std::chrono::steady_clock::now();
  try {
    const cvlattice::Metrics metrics = cvlattice::run_experiment(config);
    for (const auto& [name, value] : metrics) {
      std::printf("%-28s %.10g\n", name.c_str(), value);
    }
  } catch (const cvlattice::NumericalFailure& e) {
    std::fprintf(stderr, "numerical failure at step %ld: %s\n", e.step(),
                 e.what());
    return kNumericalFailure;
  } catch (const cvlattice::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  std::fprintf(stderr, "%s finished in %.1f s; output in %s\n",
               experiment.c_str(), seconds, config.output_dir.c_str());
  return 0;
}
