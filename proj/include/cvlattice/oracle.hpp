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

#ifndef CVLATTICE_ORACLE_HPP
#define CVLATTICE_ORACLE_HPP

// Reference solutions used to validate the Trotterized lattice: the free
// lattice dispersion, the (1+1)D retarded propagator, exact single-qumode
// evolution on the quadrature grid and exact few-site evolution in a
// truncated tensor-product Fock space.

#include <vector>

#include <Eigen/Core>

#include "cvlattice/lattice.hpp"
#include "cvlattice/potentials.hpp"
#include "cvlattice/qumode.hpp"

namespace cvlattice {

struct DispersionTable {
  Eigen::VectorXd omegas;   // sqrt(omega^2 + (4/a^2) sin^2(pi alpha / N))
  Eigen::VectorXd momenta;  // 2 pi alpha / (a N)
};

DispersionTable dispersion(int n_sites, double spacing, double omega);

/// Frequency of a single mode; symmetric in alpha <-> N - alpha bit for bit.
double mode_frequency(int alpha, int n_sites, double spacing, double omega);

/// Bessel function of the first kind, order zero. Power series (in long
/// double) for |x| <= 20, Hankel asymptotic expansion beyond.
double bessel_j0(double x);

/// D_R = (1/2) Theta(t) Theta(t^2 - x^2) J0(m sqrt(t^2 - x^2)).
double retarded_propagator(double mass, double x, double t);

/// Dense grid Hamiltonian H = p^2/2 + omega^2 q^2/2 + V(q) with a spectral
/// kinetic term, diagonalized once; evolution is a phase rotation of the
/// eigencomponents and carries no Trotter error.
class ExactSingleQumode {
 public:
  ExactSingleQumode(const QuadratureGrid& grid, double omega,
                    const Potential& potential);

  QumodeWavefunction evolve(const QumodeWavefunction& psi0, double t) const;

  const Eigen::VectorXd& energies() const { return energies_; }
  const QuadratureGrid& grid() const { return grid_; }

 private:
  QuadratureGrid grid_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd eigenvectors_;  // columns orthonormal in the plain l2 sense
};

/// Spectral p^2/2 on the grid as a dense real symmetric matrix.
Eigen::MatrixXd spectral_kinetic_matrix(const QuadratureGrid& grid);

QumodeWavefunction exact_single_qumode(const QuadratureGrid& grid,
                                       double omega, const Potential& potential,
                                       const QumodeWavefunction& psi0,
                                       double t);

/// Fock amplitudes (levels 0..cutoff) of a coherent state |alpha>, alpha
/// real, renormalized after truncation.
Eigen::VectorXcd coherent_state_coefficients(double alpha, int cutoff);

/// Full lattice Hamiltonian (on-site SHO + q^2/a^2 + interaction, minus the
/// periodic hopping q_{n+1} q_n / a^2) in the tensor-product Fock basis of
/// frequency params.mass, diagonalized once. Each site keeps levels
/// 0..fock_cutoff; site 0 is the most significant tensor factor.
class ExactFewSite {
 public:
  // Dense diagonalization; 4096^2 doubles is already 128 MiB.
  static constexpr long kMaxDimension = 4096;

  ExactFewSite(const SimulationParams& params, int fock_cutoff);

  int n_sites() const { return n_sites_; }
  int local_dimension() const { return local_dim_; }
  long dimension() const { return dimension_; }

  /// Tensor product of per-site Fock amplitude vectors (each renormalized).
  Eigen::VectorXcd product_state(
      const std::vector<Eigen::VectorXcd>& site_states) const;

  Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi0, double t) const;

  /// Reduced density matrix of one site in its local Fock basis.
  Eigen::MatrixXcd reduced_density(const Eigen::VectorXcd& psi, int site) const;

  const Eigen::MatrixXd& hamiltonian() const { return hamiltonian_; }

 private:
  int n_sites_;
  int local_dim_;
  long dimension_;
  Eigen::MatrixXd hamiltonian_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd eigenvectors_;
};

/// rho(q) = sum_{l,l'} <q|l> rho_{l l'} <l'|q> on the table's grid.
Eigen::VectorXd density_on_grid(const Eigen::MatrixXcd& reduced,
                                const FockBasisTable& table);

struct FewSiteResult {
  Eigen::VectorXcd state;
  std::vector<Eigen::MatrixXcd> reduced;  // per site, Fock basis
  std::vector<Eigen::VectorXd> densities; // per site, on the grid
};

/// Evolves a product of per-site Fock amplitude vectors for time t and
/// returns reduced per-site densities on params' quadrature grid.
FewSiteResult exact_few_site(const SimulationParams& params, int fock_cutoff,
                             const std::vector<Eigen::VectorXcd>& site_states,
                             double t);

/// sqrt(xi * sum_j (a_j - b_j)^2)
double density_l2_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                           double spacing);

}  // namespace cvlattice

#endif  // CVLATTICE_ORACLE_HPP
