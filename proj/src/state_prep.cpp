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

#include "cvlattice/state_prep.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cvlattice/oracle.hpp"

namespace cvlattice {

namespace {

void warn_if_relativistic(const WavepacketSpec& spec, double omega) {
  if (!spec.nonrelativistic(omega)) {
    std::cerr << "warning: wavepacket (k=" << spec.momentum
              << ", sigma=" << spec.width << ") is not non-relativistic for "
              << "omega=" << omega << "\n";
  }
}

void require_finite_spacing(double spacing) {
  if (!std::isfinite(spacing) || !(spacing > 0.0)) {
    throw std::invalid_argument("wavepackets need a finite lattice spacing");
  }
}

}  // namespace

double signed_momentum(int alpha, int n_sites, double spacing) {
  const int shifted = alpha < (n_sites + 1) / 2 ? alpha : alpha - n_sites;
  return 2.0 * std::numbers::pi * shifted / (spacing * n_sites);
}

LatticeState delta_impulse(const LatticeState& state, int site,
                           double amplitude) {
  const SimulationParams& params = state.params();
  if (site < 0 || site >= params.n_sites) {
    throw std::out_of_range("delta_impulse: site " + std::to_string(site) +
                            " outside [0, " + std::to_string(params.n_sites) +
                            ")");
  }
  LatticeState out = LatticeState::vacuum(params);
  out.set_time(state.time());
  out.set_site(site,
               displaced_ground_state(out.grid(), params.mass, amplitude));
  return out;
}

Eigen::VectorXcd single_excitation_amplitudes(const WavepacketSpec& spec,
                                              int n_sites, double spacing,
                                              double omega) {
  require_finite_spacing(spacing);
  if (!(spec.width > 0.0)) {
    throw std::invalid_argument("wavepacket width must be positive");
  }
  Eigen::VectorXcd c1 = Eigen::VectorXcd::Zero(n_sites);
  const double inv_two_s2 = 1.0 / (2.0 * spec.width * spec.width);
  for (int alpha = 0; alpha < n_sites; ++alpha) {
    const double k = signed_momentum(alpha, n_sites, spacing);
    const double weight =
        std::exp(-(k - spec.momentum) * (k - spec.momentum) * inv_two_s2) /
        std::sqrt(2.0 * mode_frequency(alpha, n_sites, spacing, omega) *
                  n_sites);
    if (weight == 0.0) continue;
    for (int n = 0; n < n_sites; ++n) {
      const double phase = k * (spacing * n - spec.center);
      c1[n] += weight * complex(std::cos(phase), std::sin(phase));
    }
  }
  return spec.amplitude * c1;
}

LatticeState prepare_single_excitations(const LatticeState& state,
                                        const Eigen::VectorXcd& c1) {
  const SimulationParams& params = state.params();
  if (c1.size() != params.n_sites) {
    throw std::invalid_argument("prepare_single_excitations: expected " +
                                std::to_string(params.n_sites) +
                                " amplitudes");
  }
  const FockBasisTable table = fock_table(state.grid(), params.mass, 1);
  LatticeState out = LatticeState::vacuum(params);
  out.set_time(state.time());
  for (int n = 0; n < params.n_sites; ++n) {
    const double p1 = std::norm(c1[n]);
    if (p1 > 1.0) {
      throw std::invalid_argument(
          "prepare_single_excitations: |c1| > 1 at site " + std::to_string(n));
    }
    const double c0 = std::sqrt(1.0 - p1);
    Eigen::VectorXcd psi = c0 * table.column(0).cast<complex>() +
                           c1[n] * table.column(1).cast<complex>();
    out.set_site(n, QumodeWavefunction(state.grid(), std::move(psi)));
  }
  return out;
}

LatticeState gaussian_wavepacket(const LatticeState& state,
                                 const WavepacketSpec& spec) {
  const SimulationParams& params = state.params();
  warn_if_relativistic(spec, params.mass);
  return prepare_single_excitations(
      state, single_excitation_amplitudes(spec, params.n_sites, params.spacing,
                                          params.mass));
}

double envelope_overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.cwiseAbs().dot(b.cwiseAbs()) / (na * nb);
}

LatticeState two_wavepackets(const LatticeState& state,
                             const WavepacketSpec& left,
                             const WavepacketSpec& right) {
  const SimulationParams& params = state.params();
  warn_if_relativistic(left, params.mass);
  warn_if_relativistic(right, params.mass);
  const Eigen::VectorXcd c_left = single_excitation_amplitudes(
      left, params.n_sites, params.spacing, params.mass);
  const Eigen::VectorXcd c_right = single_excitation_amplitudes(
      right, params.n_sites, params.spacing, params.mass);
  const double overlap = envelope_overlap(c_left, c_right);
  if (overlap >= 1e-6) {
    std::cerr << "warning: wavepacket envelopes overlap (" << overlap
              << " >= 1e-6)\n";
  }
  return prepare_single_excitations(state, c_left + c_right);
}

Eigen::VectorXd proto_wavepacket_profile(const WavepacketSpec& spec,
                                         int n_sites, double omega,
                                         double spacing) {
  require_finite_spacing(spacing);
  if (n_sites < 1 || !(omega > 0.0) || !(spec.width > 0.0)) {
    throw std::invalid_argument("proto_wavepacket_profile: bad arguments");
  }
  Eigen::VectorXd profile = Eigen::VectorXd::Zero(n_sites);
  const double inv_two_s2 = 1.0 / (2.0 * spec.width * spec.width);
  for (int alpha = 0; alpha < n_sites; ++alpha) {
    const double k = signed_momentum(alpha, n_sites, spacing);
    const double weight =
        std::exp(-(k - spec.momentum) * (k - spec.momentum) * inv_two_s2);
    if (weight == 0.0) continue;
    for (int n = 0; n < n_sites; ++n) {
      profile[n] += weight * std::cos(k * (spacing * n - spec.center));
    }
  }
  return spec.amplitude / (omega * n_sites) * profile;
}

LatticeState displaced_lattice(const LatticeState& state,
                               const Eigen::VectorXd& displacements) {
  const SimulationParams& params = state.params();
  if (displacements.size() != params.n_sites) {
    throw std::invalid_argument("displaced_lattice: expected " +
                                std::to_string(params.n_sites) +
                                " displacements");
  }
  LatticeState out = LatticeState::vacuum(params);
  out.set_time(state.time());
  for (int n = 0; n < params.n_sites; ++n) {
    out.set_site(n, displaced_ground_state(out.grid(), params.mass,
                                           displacements[n]));
  }
  return out;
}

}  // namespace cvlattice
