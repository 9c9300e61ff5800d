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

#ifndef CVLATTICE_LATTICE_HPP
#define CVLATTICE_LATTICE_HPP

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "cvlattice/gates.hpp"
#include "cvlattice/qumode.hpp"

namespace cvlattice {

/// Raised when a non-finite value appears during time evolution.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, long step)
      : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

struct GridConfig {
  int m_points = 200;
  double extent = 20.0;
  int l_trunc = kDefaultFockTruncation;
};

/// Physical and numerical parameters of a lattice run. Times are in lattice
/// units (the overall 1/a of the Hamiltonian is absorbed into dt).
struct SimulationParams {
  int n_sites = 2;
  double spacing = 1.0;  // a; +inf decouples the sites
  double mass = 1.0;     // omega
  double coupling = 0.0; // lambda in (lambda/4!) phi^4
  double dt = 0.01;
  double total_time = 0.0;
  int record_stride = 100;
  GridConfig grid;

  /// Throws std::invalid_argument on any violated constraint.
  void validate() const;
  /// round(total_time / dt); throws if that is not an integer within 1e-6.
  long steps() const;
  QuadratureGrid make_grid() const;
  Potential interaction() const;
};

/// Product state of N qumodes on a shared grid with periodic topology.
class LatticeState {
 public:
  /// Every site in the SHO ground state of frequency params.mass.
  static LatticeState vacuum(const SimulationParams& params);

  LatticeState(const SimulationParams& params, SiteBlock sites,
               double time = 0.0);

  const SimulationParams& params() const { return params_; }
  const QuadratureGrid& grid() const { return grid_; }
  int n_sites() const { return params_.n_sites; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  const SiteBlock& sites() const { return sites_; }
  SiteBlock& sites() { return sites_; }

  QumodeWavefunction site(int n) const;
  void set_site(int n, const QumodeWavefunction& psi);

 private:
  SimulationParams params_;
  QuadratureGrid grid_;
  SiteBlock sites_;
  double time_;
};

/// Prebuilt gates for one parameter set. Each step applies, in order, the
/// truncated hopping transform, the effective-potential phase and the SHO
/// rotation, renormalizing after the hop and after the rotation.
class TrotterEngine {
 public:
  explicit TrotterEngine(const SimulationParams& params);

  /// Advances by dt; returns the largest per-site |norm^2 - 1| seen.
  double step(LatticeState& state) const;
  /// Exact inverse ordering with -dt: R(-dt), V(-dt), hop(-dt).
  double reverse_step(LatticeState& state) const;

  const SimulationParams& params() const { return params_; }
  const FockBasisTable& fock_basis() const { return table_; }

 private:
  struct Gates {
    RotationGate rotation;
    PotentialPhase potential;
    HopPhases hop;
  };
  static Gates make_gates(const SimulationParams& params,
                          const FockBasisTable& table, double dt);

  SimulationParams params_;
  FockBasisTable table_;
  Gates forward_;
  mutable std::optional<Gates> backward_;
};

/// One step with freshly built gates. Prefer TrotterEngine in loops.
LatticeState trotter_step(const LatticeState& state);

/// Per-site expectation values for a lattice block, with the scratch FFT
/// for the spectral <p^2> planned once.
class ObservableEvaluator {
 public:
  explicit ObservableEvaluator(const SimulationParams& params);

  Eigen::VectorXd field(const LatticeState& state) const;
  Eigen::VectorXd energy_density(const LatticeState& state) const;

 private:
  SimulationParams params_;
  QuadratureGrid grid_;
  Eigen::VectorXd q_;
  Eigen::VectorXd q2_;
  Eigen::VectorXd interaction_;
  Eigen::VectorXd k2_;
  std::shared_ptr<const detail::BatchedFft> fft_;
};

/// <q_n> for every site.
Eigen::VectorXd field_expectation(const LatticeState& state);

/// E_n = <p^2>/2 + omega^2 <q^2>/2 + <V_I(q)> plus half of each adjacent
/// bond's gradient energy (1/2a^2)(<q_{n+1}^2> + <q_n^2> - 2<q_{n+1}><q_n>).
Eigen::VectorXd energy_density(const LatticeState& state);

struct ObservableSeries {
  std::vector<double> times;
  Eigen::MatrixXd field_vev;       // snapshots x N
  Eigen::MatrixXd energy_density;  // snapshots x N
  std::vector<double> total_energy;
  std::vector<double> drift_times;  // one entry per step
  std::vector<double> norm_drift;   // max per-site drift in that step
};

using SnapshotObserver = std::function<void(const LatticeState&)>;

/// Runs params.steps() Trotter steps from `state` (which is advanced in
/// place), recording observables at step 0 and every record_stride steps.
ObservableSeries evolve(LatticeState& state,
                        const SnapshotObserver& observer = {});

}  // namespace cvlattice

#endif  // CVLATTICE_LATTICE_HPP
