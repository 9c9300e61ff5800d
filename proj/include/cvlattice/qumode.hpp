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

#ifndef CVLATTICE_QUMODE_HPP
#define CVLATTICE_QUMODE_HPP

#include <complex>
#include <cstddef>

#include <Eigen/Core>

namespace cvlattice {

using complex = std::complex<double>;

/// Uniform discretization of one quadrature axis, q_j = j*xi - L/2 for
/// j in [0, M-1] with xi = L/M.
class QuadratureGrid {
 public:
  QuadratureGrid(int m_points, double extent);

  int size() const { return m_points_; }
  double extent() const { return extent_; }
  double spacing() const { return spacing_; }
  double point(int j) const { return j * spacing_ - 0.5 * extent_; }
  Eigen::VectorXd points() const;

  /// Angular wavenumbers of the discrete Fourier modes in FFT order.
  Eigen::VectorXd wavenumbers() const;

  friend bool operator==(const QuadratureGrid&, const QuadratureGrid&) = default;

 private:
  int m_points_;
  double extent_;
  double spacing_;
};

QuadratureGrid build_grid(int m_points, double extent);

/// Complex amplitudes of a single qumode over a quadrature grid.
///
/// The normalizing constructor enforces xi * sum |psi_j|^2 = 1. Use
/// `unnormalized` when the raw amplitudes matter, e.g. to measure leakage.
class QumodeWavefunction {
 public:
  QumodeWavefunction(QuadratureGrid grid, Eigen::VectorXcd amplitudes);

  static QumodeWavefunction unnormalized(QuadratureGrid grid,
                                         Eigen::VectorXcd amplitudes);

  const QuadratureGrid& grid() const { return grid_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Eigen::VectorXcd& amplitudes() { return amplitudes_; }
  int size() const { return grid_.size(); }

  double norm_squared() const;
  /// Rescales to unit norm and returns the norm squared it had before.
  double renormalize();

  double mean_q() const;
  double mean_q2() const;
  /// <p^2> from the spectral derivative of psi.
  double mean_p2() const;
  Eigen::VectorXd density() const;

 private:
  struct NoNormalize {};
  QumodeWavefunction(QuadratureGrid grid, Eigen::VectorXcd amplitudes,
                     NoNormalize);

  QuadratureGrid grid_;
  Eigen::VectorXcd amplitudes_;
};

/// Harmonic-oscillator eigenfunctions <q_i|l> of frequency omega sampled on
/// a grid, one column per Fock level l = 0..l_trunc.
class FockBasisTable {
 public:
  FockBasisTable(const QuadratureGrid& grid, double omega, int l_trunc);

  const QuadratureGrid& grid() const { return grid_; }
  double omega() const { return omega_; }
  int l_trunc() const { return l_trunc_; }
  int levels() const { return l_trunc_ + 1; }
  const Eigen::MatrixXd& values() const { return values_; }
  auto column(int level) const { return values_.col(level); }

 private:
  QuadratureGrid grid_;
  double omega_;
  int l_trunc_;
  Eigen::MatrixXd values_;
};

inline constexpr int kDefaultFockTruncation = 80;

FockBasisTable fock_table(const QuadratureGrid& grid, double omega,
                          int l_trunc = kDefaultFockTruncation);

/// Fills `out` (length x.size() by levels) with normalized Hermite functions
/// of argument x, using the three-term recurrence without factorials.
void hermite_functions(const Eigen::Ref<const Eigen::VectorXd>& x, int l_trunc,
                       Eigen::Ref<Eigen::MatrixXd> out);

QumodeWavefunction ground_state(const QuadratureGrid& grid, double omega);

/// Ground state shifted to <q> = d. Throws std::out_of_range when the
/// Gaussian would not fit inside the grid (|d| + 5/sqrt(omega) >= L/2).
QumodeWavefunction displaced_ground_state(const QuadratureGrid& grid,
                                          double omega, double d);

/// c_l = xi * sum_i <q_i|l> psi(q_i).
Eigen::VectorXcd fock_decompose(const QumodeWavefunction& psi,
                                const FockBasisTable& table);

/// Inverse of fock_decompose; not renormalized.
QumodeWavefunction fock_compose(const Eigen::VectorXcd& coefficients,
                                const FockBasisTable& table);

}  // namespace cvlattice

#endif  // CVLATTICE_QUMODE_HPP
