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

#ifndef CVLATTICE_EXPERIMENTS_HPP
#define CVLATTICE_EXPERIMENTS_HPP

// Experiment drivers. Each validates its configuration, creates
// config.output_dir, writes config-echo.toml, field.csv, energy.csv,
// norms.csv and metrics.csv (plus the experiment-specific tables listed
// below) and returns the metrics it wrote.
//
//   single-qumode     density.csv (t,q,trotter,exact), discrepancy.csv
//   propagator        slice.csv (t,field,propagator)
//   scattering        tracks.csv (t,left,right,center_energy)
//   degenerate-check  deviation.csv (t,intersite,single)
//   oracle-compare    oracle.csv (t,site,distance,fidelity)
//
// Numerical failures surface as NumericalFailure; configuration problems as
// ConfigError.

#include "cvlattice/config.hpp"
#include "cvlattice/output.hpp"

namespace cvlattice {

Metrics run_single_qumode(const ExperimentConfig& config);
Metrics run_propagator(const ExperimentConfig& config);
Metrics run_scattering(const ExperimentConfig& config);
Metrics run_degenerate_check(const ExperimentConfig& config);
Metrics run_oracle_compare(const ExperimentConfig& config);

/// Dispatches on config.experiment.
Metrics run_experiment(const ExperimentConfig& config);

/// Looks a metric up by name; throws std::out_of_range if absent.
double metric(const Metrics& metrics, const std::string& name);

}  // namespace cvlattice

#endif  // CVLATTICE_EXPERIMENTS_HPP
