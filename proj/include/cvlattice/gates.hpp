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

#ifndef CVLATTICE_GATES_HPP
#define CVLATTICE_GATES_HPP

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cvlattice/potentials.hpp"
#include "cvlattice/qumode.hpp"

namespace cvlattice {

namespace detail {
class BatchedFft;
}

// Gates act either on a single QumodeWavefunction or on a lattice block.
// A lattice block is an N x M complex matrix: row n holds site n sampled on
// the shared quadrature grid. Column-major storage keeps each grid point's
// site vector contiguous, which is what the hopping transform needs.
using SiteBlock = Eigen::MatrixXcd;

/// SHO rotation exp(-i dt H_SHO) assembled from a truncated Fock sum:
/// U_ij = xi * sum_l <q_i|l> exp(-i dt omega (l + 1/2)) <l|q_j>.
class RotationGate {
 public:
  RotationGate(const FockBasisTable& table, double dt);

  double omega() const { return omega_; }
  double dt() const { return dt_; }
  /// Dense M x M form of the gate.
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  void apply(Eigen::Ref<Eigen::VectorXcd> psi) const;
  void apply(SiteBlock& sites) const;

 private:
  double omega_;
  double dt_;
  double spacing_;
  Eigen::MatrixXd basis_;          // M x (l_trunc+1)
  Eigen::VectorXcd level_phases_;  // exp(-i dt omega (l + 1/2))
  Eigen::MatrixXcd matrix_;
};

RotationGate build_rotation(const FockBasisTable& table, double dt);

/// Diagonal phase exp(-i dt V(q_i)).
class PotentialPhase {
 public:
  explicit PotentialPhase(Eigen::VectorXcd diagonal);

  const Eigen::VectorXcd& diagonal() const { return diagonal_; }

  void apply(Eigen::Ref<Eigen::VectorXcd> psi) const;
  void apply(SiteBlock& sites) const;

 private:
  Eigen::VectorXcd diagonal_;
};

/// Throws std::invalid_argument if the potential is not finite on the grid.
PotentialPhase build_potential_phase(const QuadratureGrid& grid,
                                     const Potential& potential, double dt);

/// Per-momentum phases of the entanglement-truncated hopping transform,
/// c_alpha(q_j) = exp(+i dt cos(2 pi alpha / N) q_j^2 / a^2), stored N x M.
class HopPhases {
 public:
  HopPhases(const QuadratureGrid& grid, int n_sites, double spacing, double dt);

  int lattice_sites() const { return n_sites_; }
  double spacing() const { return spacing_; }
  double dt() const { return dt_; }
  const Eigen::MatrixXcd& phases() const { return phases_; }

  /// Raw transform on a block: for every grid column, unitary DFT over the
  /// site index, multiply by c_alpha, inverse DFT. No renormalization.
  void apply(SiteBlock& sites) const;

 private:
  int n_sites_;
  double spacing_;
  double dt_;
  Eigen::MatrixXcd phases_;
  std::shared_ptr<const detail::BatchedFft> to_momentum_;
  std::shared_ptr<const detail::BatchedFft> to_position_;
};

HopPhases build_hop_phases(const QuadratureGrid& grid, int n_sites,
                           double spacing, double dt);

/// Dense N x N form of the truncated hopping matrix at quadrature value q,
/// sum_alpha U^dagger_{n alpha} c_alpha(q) U_{alpha m}.
Eigen::MatrixXcd dense_hop_matrix(int n_sites, double spacing, double dt,
                                  double q);

/// Rescales every row of the block to unit norm. Returns the largest
/// |norm^2 - 1| seen before rescaling (NaN if any norm is not finite).
double renormalize_sites(SiteBlock& sites, double spacing);

struct DiagonalStepResult {
  QumodeWavefunction psi;
  double drift;  // |norm^2 - 1| before renormalization
};

/// psi' = U_R (diag(U_V) psi), renormalized.
DiagonalStepResult apply_diagonal_step(const QumodeWavefunction& psi,
                                       const RotationGate& rotation,
                                       const PotentialPhase& potential);

struct HopResult {
  std::vector<QumodeWavefunction> sites;
  double max_drift;
};

HopResult apply_hop(std::span<const QumodeWavefunction> sites,
                    const HopPhases& hop);

SiteBlock pack_sites(std::span<const QumodeWavefunction> sites);

}  // namespace cvlattice

#endif  // CVLATTICE_GATES_HPP
