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

#ifndef CVLATTICE_CONFIG_HPP
#define CVLATTICE_CONFIG_HPP

// Experiment configuration: a small TOML subset (bare keys, [table] and
// [[wavepacket]] headers, numbers, booleans, strings, flat arrays, comments)
// plus command-line overrides of the form key=value.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cvlattice/lattice.hpp"
#include "cvlattice/state_prep.hpp"

namespace cvlattice {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment {
  kSingleQumode,
  kPropagator,
  kScattering,
  kDegenerateCheck,
  kOracleCompare,
};

std::string_view experiment_name(Experiment e);
/// Throws ConfigError for an unknown name.
Experiment parse_experiment(std::string_view name);

struct SingleQumodeOptions {
  double epsilon = 0.1;
  double displacement = 0.0;  // initial <q> of the SHO ground state
  std::vector<double> times = {100.0, 200.0, 300.0, 400.0};
};

struct PropagatorOptions {
  int site = -1;  // -1 selects N/2
  double amplitude = 1.0;
  double band = 3.0;     // light-cone tolerance, lattice units
  double exclude = 3.0;  // early-time cut for the slice correlation
};

struct ScatteringOptions {
  double speed_window = 0.25;  // fraction of the run used for the speed fit
  int center_halfwidth = 2;    // sites averaged around the meeting point
};

struct DegenerateOptions {
  double displacement = 1.0;  // common initial displacement of every site
};

struct OracleOptions {
  int fock_cutoff = 12;
  int site = 0;
  double displacement = 1.0;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::kSingleQumode;
  SimulationParams params;
  std::vector<WavepacketSpec> wavepackets;
  std::string output_dir = "out";
  std::uint64_t seed = 0;  // reserved; no stochastic step uses it
  int threads = 0;         // 0 = library default
  bool write_psi = false;

  SingleQumodeOptions single_qumode;
  PropagatorOptions propagator;
  ScatteringOptions scattering;
  DegenerateOptions degenerate;
  OracleOptions oracle;
};

/// Defaults for one experiment (e.g. the cubic-quartic test potential runs
/// to t = 400; scattering uses two counter-moving packets).
ExperimentConfig default_config(Experiment e);

/// Parses `text` on top of default_config(e). Unknown keys, wrong types and
/// malformed lines raise ConfigError; `experiment = "..."` in the text must
/// agree with e when present.
ExperimentConfig parse_config(std::string_view text, Experiment e);
ExperimentConfig load_config(const std::string& path, Experiment e);

/// Applies one "key=value" override; the value uses the file syntax.
void apply_override(ExperimentConfig& config, std::string_view assignment);

/// Schema checks that need the whole configuration (ranges, cross-field
/// constraints). Throws ConfigError.
void validate_config(const ExperimentConfig& config);

/// Serializes back to the file syntax; parse_config(to_toml(c)) == c.
std::string to_toml(const ExperimentConfig& config);

}  // namespace cvlattice

#endif  // CVLATTICE_CONFIG_HPP
