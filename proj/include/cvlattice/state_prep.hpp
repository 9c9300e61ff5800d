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

#ifndef CVLATTICE_STATE_PREP_HPP
#define CVLATTICE_STATE_PREP_HPP

#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "cvlattice/lattice.hpp"

namespace cvlattice {

/// Gaussian wavepacket centred at `center` (lattice position) with mean
/// momentum `momentum` (units of 1/a) and momentum-space spread `width`.
struct WavepacketSpec {
  double center = 0.0;
  double momentum = 0.0;
  double width = 0.1;
  double amplitude = 1.0;

  /// True when both the mean momentum and the spread stay below the mass,
  /// the regime where the decoupled-lattice vacuum is a good approximation.
  bool nonrelativistic(double omega) const {
    return std::abs(momentum) < omega && width < omega;
  }
};

/// Signed lattice momentum 2 pi alpha' / (a N) for mode alpha in [0, N),
/// with alpha' = alpha - N in the upper half so that alpha and N - alpha
/// pair up as +k and -k. For even N the mode alpha = N/2 maps to -pi/a.
double signed_momentum(int alpha, int n_sites, double spacing);

/// Vacuum everywhere except `site`, which holds a ground state displaced by
/// `amplitude` in q. Throws std::out_of_range for a bad site or an amplitude
/// that does not fit on the grid.
LatticeState delta_impulse(const LatticeState& state, int site,
                           double amplitude);

/// Single-excitation amplitudes c1_n of one packet,
/// sum_alpha (2 omega_alpha N)^{-1/2} exp(-(k_alpha - kbar)^2 / 2 sigma^2)
///   exp(i k_alpha (x_n - xbar)), scaled by spec.amplitude.
Eigen::VectorXcd single_excitation_amplitudes(const WavepacketSpec& spec,
                                              int n_sites, double spacing,
                                              double omega);

/// Each site becomes c0_n |0> + c1_n |1> in its local Fock basis with
/// c0_n = sqrt(1 - |c1_n|^2). Throws std::invalid_argument if |c1_n| > 1.
LatticeState prepare_single_excitations(const LatticeState& state,
                                        const Eigen::VectorXcd& c1);

LatticeState gaussian_wavepacket(const LatticeState& state,
                                 const WavepacketSpec& spec);

/// Normalized overlap of the |c1| envelopes of two packets.
double envelope_overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// Superposes the single-excitation amplitudes of two packets before the
/// per-site normalization. Prints a warning if the envelopes overlap by more
/// than 1e-6.
LatticeState two_wavepackets(const LatticeState& state,
                             const WavepacketSpec& left,
                             const WavepacketSpec& right);

/// Real field profile of a proto-wavepacket on the decoupled lattice,
/// (A0 / (omega N)) sum_alpha exp(-(k_alpha - kbar)^2 / 2 sigma^2)
///   cos(k_alpha (x_n - xbar)), with A0 = spec.amplitude.
Eigen::VectorXd proto_wavepacket_profile(const WavepacketSpec& spec,
                                         int n_sites, double omega,
                                         double spacing = 1.0);

/// Displaces each site's ground state by the matching profile entry.
LatticeState displaced_lattice(const LatticeState& state,
                               const Eigen::VectorXd& displacements);

}  // namespace cvlattice

#endif  // CVLATTICE_STATE_PREP_HPP
