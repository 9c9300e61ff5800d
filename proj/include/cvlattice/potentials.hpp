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

#ifndef CVLATTICE_POTENTIALS_HPP
#define CVLATTICE_POTENTIALS_HPP

#include <functional>

namespace cvlattice {

using Potential = std::function<double(double)>;

inline Potential zero_potential() {
  return [](double) { return 0.0; };
}

/// (lambda/4!) q^4
inline Potential phi4_interaction(double lambda) {
  return [lambda](double q) { return lambda / 24.0 * q * q * q * q; };
}

/// On-site part of the lattice Hamiltonian: the q^2/a^2 remnant of the
/// gradient term plus the interaction. An infinite spacing drops the remnant.
inline Potential effective_potential(double spacing, Potential interaction) {
  const double inv_a2 = 1.0 / (spacing * spacing);
  return [inv_a2, interaction = std::move(interaction)](double q) {
    return inv_a2 * q * q + interaction(q);
  };
}

/// Asymmetric double-well benchmark: -(1 + eps/4)/2 q^3 + q^4/8.
inline Potential cubic_quartic_test_potential(double epsilon) {
  return [epsilon](double q) {
    return -0.5 * (1.0 + 0.25 * epsilon) * q * q * q + 0.125 * q * q * q * q;
  };
}

}  // namespace cvlattice

#endif  // CVLATTICE_POTENTIALS_HPP
