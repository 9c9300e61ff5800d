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

#include "cvlattice/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fft_plan.hpp"

namespace cvlattice {

// ---------------------------------------------------------------------------
// SimulationParams

void SimulationParams::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("SimulationParams: " + what);
  };
  if (n_sites < 2) fail("n_sites must be >= 2");
  if (!(spacing > 0.0)) fail("spacing must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) fail("mass must be positive");
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) {
    fail("coupling must be >= 0");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
  if (!(total_time >= 0.0) || !std::isfinite(total_time)) {
    fail("total_time must be >= 0");
  }
  if (record_stride < 1) fail("record_stride must be >= 1");
  if (grid.m_points < 2) fail("grid.m_points must be >= 2");
  if (!(grid.extent > 0.0)) fail("grid.extent must be positive");
  if (grid.l_trunc < 0) fail("grid.l_trunc must be >= 0");
  steps();
}

long SimulationParams::steps() const {
  const double ratio = total_time / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-6 * std::max(1.0, ratio)) {
    throw std::invalid_argument(
        "SimulationParams: total_time is not an integer multiple of dt");
  }
  return static_cast<long>(rounded);
}

QuadratureGrid SimulationParams::make_grid() const {
  return QuadratureGrid(grid.m_points, grid.extent);
}

Potential SimulationParams::interaction() const {
  return phi4_interaction(coupling);
}

// ---------------------------------------------------------------------------
// LatticeState

LatticeState::LatticeState(const SimulationParams& params, SiteBlock sites,
                           double time)
    : params_(params), grid_(params.make_grid()), sites_(std::move(sites)),
      time_(time) {
  if (sites_.rows() != params.n_sites || sites_.cols() != grid_.size()) {
    throw std::invalid_argument("LatticeState: block shape does not match "
                                "params");
  }
}

LatticeState LatticeState::vacuum(const SimulationParams& params) {
  params.validate();
  const QuadratureGrid grid = params.make_grid();
  const QumodeWavefunction ground = ground_state(grid, params.mass);
  SiteBlock block =
      ground.amplitudes().transpose().replicate(params.n_sites, 1);
  return LatticeState(params, std::move(block));
}

QumodeWavefunction LatticeState::site(int n) const {
  if (n < 0 || n >= n_sites()) {
    throw std::out_of_range("LatticeState::site: index " + std::to_string(n));
  }
  return QumodeWavefunction::unnormalized(grid_, sites_.row(n).transpose());
}

void LatticeState::set_site(int n, const QumodeWavefunction& psi) {
  if (n < 0 || n >= n_sites()) {
    throw std::out_of_range("LatticeState::set_site: index " +
                            std::to_string(n));
  }
  if (!(psi.grid() == grid_)) {
    throw std::invalid_argument("LatticeState::set_site: grid mismatch");
  }
  sites_.row(n) = psi.amplitudes().transpose();
}

// ---------------------------------------------------------------------------
// TrotterEngine

TrotterEngine::Gates TrotterEngine::make_gates(const SimulationParams& params,
                                               const FockBasisTable& table,
                                               double dt) {
  const QuadratureGrid& grid = table.grid();
  return Gates{
      RotationGate(table, dt),
      build_potential_phase(
          grid, effective_potential(params.spacing, params.interaction()), dt),
      HopPhases(grid, params.n_sites, params.spacing, dt)};
}

TrotterEngine::TrotterEngine(const SimulationParams& params)
    : params_((params.validate(), params)),
      table_(params.make_grid(), params.mass, params.grid.l_trunc),
      forward_(make_gates(params, table_, params.dt)) {}

double TrotterEngine::step(LatticeState& state) const {
  SiteBlock& sites = state.sites();
  const double xi = state.grid().spacing();
  forward_.hop.apply(sites);
  const double hop_drift = renormalize_sites(sites, xi);
  forward_.potential.apply(sites);
  forward_.rotation.apply(sites);
  const double diag_drift = renormalize_sites(sites, xi);
  state.set_time(state.time() + params_.dt);
  if (std::isnan(hop_drift) || std::isnan(diag_drift)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return std::max(hop_drift, diag_drift);
}

double TrotterEngine::reverse_step(LatticeState& state) const {
  if (!backward_) backward_.emplace(make_gates(params_, table_, -params_.dt));
  SiteBlock& sites = state.sites();
  const double xi = state.grid().spacing();
  backward_->rotation.apply(sites);
  const double diag_drift = renormalize_sites(sites, xi);
  backward_->potential.apply(sites);
  backward_->hop.apply(sites);
  const double hop_drift = renormalize_sites(sites, xi);
  state.set_time(state.time() - params_.dt);
  if (std::isnan(hop_drift) || std::isnan(diag_drift)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return std::max(hop_drift, diag_drift);
}

LatticeState trotter_step(const LatticeState& state) {
  LatticeState next = state;
  const double drift = TrotterEngine(state.params()).step(next);
  if (std::isnan(drift)) {
    throw NumericalFailure("trotter_step: non-finite wavefunction", 0);
  }
  return next;
}

// ---------------------------------------------------------------------------
// Observables

ObservableEvaluator::ObservableEvaluator(const SimulationParams& params)
    : params_(params), grid_(params.make_grid()) {
  q_ = grid_.points();
  q2_ = q_.cwiseAbs2();
  const Potential v = params.interaction();
  interaction_.resize(grid_.size());
  for (int j = 0; j < grid_.size(); ++j) interaction_[j] = v(q_[j]);
  k2_ = grid_.wavenumbers().cwiseAbs2();
  // Transform along the grid index of an N x M column-major block.
  fft_ = std::make_shared<detail::BatchedFft>(grid_.size(), params.n_sites,
                                              params.n_sites, 1, FFTW_FORWARD);
}

Eigen::VectorXd ObservableEvaluator::field(const LatticeState& state) const {
  return grid_.spacing() * (state.sites().cwiseAbs2() * q_);
}

Eigen::VectorXd ObservableEvaluator::energy_density(
    const LatticeState& state) const {
  const double xi = grid_.spacing();
  const int n_sites = params_.n_sites;
  const Eigen::MatrixXd abs2 = state.sites().cwiseAbs2();
  const Eigen::VectorXd mean_q = xi * (abs2 * q_);
  const Eigen::VectorXd mean_q2 = xi * (abs2 * q2_);
  const Eigen::VectorXd mean_v = xi * (abs2 * interaction_);

  SiteBlock spectrum = state.sites();
  fft_->execute(spectrum.data());
  const Eigen::VectorXd mean_p2 =
      xi / grid_.size() * (spectrum.cwiseAbs2() * k2_);

  const double omega2 = params_.mass * params_.mass;
  const double inv_a2 =
      std::isinf(params_.spacing) ? 0.0
                                  : 1.0 / (params_.spacing * params_.spacing);
  Eigen::VectorXd bond(n_sites);  // bond n joins sites n and n+1
  for (int n = 0; n < n_sites; ++n) {
    const int next = (n + 1) % n_sites;
    bond[n] = 0.5 * inv_a2 *
              (mean_q2[next] + mean_q2[n] - 2.0 * mean_q[next] * mean_q[n]);
  }
  Eigen::VectorXd energy(n_sites);
  for (int n = 0; n < n_sites; ++n) {
    const int prev = (n + n_sites - 1) % n_sites;
    energy[n] = 0.5 * mean_p2[n] + 0.5 * omega2 * mean_q2[n] + mean_v[n] +
                0.5 * (bond[prev] + bond[n]);
  }
  return energy;
}

Eigen::VectorXd field_expectation(const LatticeState& state) {
  return ObservableEvaluator(state.params()).field(state);
}

Eigen::VectorXd energy_density(const LatticeState& state) {
  return ObservableEvaluator(state.params()).energy_density(state);
}

// ---------------------------------------------------------------------------
// Evolution

ObservableSeries evolve(LatticeState& state, const SnapshotObserver& observer) {
  const SimulationParams& params = state.params();
  params.validate();
  const long steps = params.steps();
  const long stride = params.record_stride;
  const TrotterEngine engine(params);
  const ObservableEvaluator observables(params);

  const long snapshots = steps / stride + 1;
  ObservableSeries series;
  series.field_vev.resize(snapshots, params.n_sites);
  series.energy_density.resize(snapshots, params.n_sites);
  series.times.reserve(snapshots);
  series.total_energy.reserve(snapshots);
  series.drift_times.reserve(steps);
  series.norm_drift.reserve(steps);

  const double t0 = state.time();
  auto record = [&](long index) {
    series.times.push_back(state.time());
    series.field_vev.row(index) = observables.field(state).transpose();
    const Eigen::VectorXd energy = observables.energy_density(state);
    series.energy_density.row(index) = energy.transpose();
    series.total_energy.push_back(energy.sum());
    if (observer) observer(state);
  };

  record(0);
  for (long s = 1; s <= steps; ++s) {
    const double drift = engine.step(state);
    // Recompute from the step count so the clock does not accumulate error.
    state.set_time(t0 + s * params.dt);
    if (std::isnan(drift)) {
      throw NumericalFailure(
          "evolve: non-finite wavefunction at step " + std::to_string(s), s);
    }
    series.drift_times.push_back(state.time());
    series.norm_drift.push_back(drift);
    if (s % stride == 0) record(s / stride);
  }
  return series;
}

}  // namespace cvlattice
