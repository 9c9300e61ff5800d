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

#include "cvlattice/qumode.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "fft_plan.hpp"

namespace cvlattice {

QuadratureGrid::QuadratureGrid(int m_points, double extent)
    : m_points_(m_points), extent_(extent), spacing_(extent / m_points) {
  if (m_points < 2) {
    throw std::invalid_argument("QuadratureGrid: need at least 2 points, got " +
                                std::to_string(m_points));
  }
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw std::invalid_argument("QuadratureGrid: extent must be positive");
  }
}

Eigen::VectorXd QuadratureGrid::points() const {
  Eigen::VectorXd q(m_points_);
  for (int j = 0; j < m_points_; ++j) q[j] = point(j);
  return q;
}

Eigen::VectorXd QuadratureGrid::wavenumbers() const {
  Eigen::VectorXd k(m_points_);
  const double dk = 2.0 * std::numbers::pi / extent_;
  for (int m = 0; m < m_points_; ++m) {
    k[m] = dk * (m < (m_points_ + 1) / 2 ? m : m - m_points_);
  }
  return k;
}

QuadratureGrid build_grid(int m_points, double extent) {
  return QuadratureGrid(m_points, extent);
}

QumodeWavefunction::QumodeWavefunction(QuadratureGrid grid,
                                       Eigen::VectorXcd amplitudes,
                                       NoNormalize)
    : grid_(grid), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != grid_.size()) {
    throw std::invalid_argument(
        "QumodeWavefunction: amplitude count does not match grid");
  }
}

QumodeWavefunction::QumodeWavefunction(QuadratureGrid grid,
                                       Eigen::VectorXcd amplitudes)
    : QumodeWavefunction(grid, std::move(amplitudes), NoNormalize{}) {
  const double n2 = norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw std::invalid_argument("QumodeWavefunction: cannot normalize");
  }
  renormalize();
}

QumodeWavefunction QumodeWavefunction::unnormalized(
    QuadratureGrid grid, Eigen::VectorXcd amplitudes) {
  return QumodeWavefunction(grid, std::move(amplitudes), NoNormalize{});
}

double QumodeWavefunction::norm_squared() const {
  return grid_.spacing() * amplitudes_.squaredNorm();
}

double QumodeWavefunction::renormalize() {
  const double n2 = norm_squared();
  amplitudes_ /= std::sqrt(n2);
  return n2;
}

Eigen::VectorXd QumodeWavefunction::density() const {
  return amplitudes_.cwiseAbs2();
}

double QumodeWavefunction::mean_q() const {
  return grid_.spacing() * density().dot(grid_.points());
}

double QumodeWavefunction::mean_q2() const {
  return grid_.spacing() * density().dot(grid_.points().cwiseAbs2());
}

double QumodeWavefunction::mean_p2() const {
  const int m = grid_.size();
  Eigen::VectorXcd spectrum = amplitudes_;
  detail::BatchedFft fft(m, 1, 1, m, FFTW_FORWARD);
  fft.execute(spectrum.data());
  // Parseval: xi * sum_j |psi'_j|^2 = (xi/M) * sum_k k^2 |psi_k|^2.
  return grid_.spacing() / m *
         spectrum.cwiseAbs2().dot(grid_.wavenumbers().cwiseAbs2());
}

void hermite_functions(const Eigen::Ref<const Eigen::VectorXd>& x, int l_trunc,
                       Eigen::Ref<Eigen::MatrixXd> out) {
  const Eigen::Index n = x.size();
  const double norm0 = std::pow(std::numbers::pi, -0.25);
  out.col(0) = norm0 * (-0.5 * x.array().square()).exp();
  if (l_trunc >= 1) {
    out.col(1) = std::sqrt(2.0) * x.array() * out.col(0).array();
  }
  for (int l = 1; l < l_trunc; ++l) {
    const double a = std::sqrt(2.0 / (l + 1));
    const double b = std::sqrt(static_cast<double>(l) / (l + 1));
    for (Eigen::Index i = 0; i < n; ++i) {
      out(i, l + 1) = a * x[i] * out(i, l) - b * out(i, l - 1);
    }
  }
}

FockBasisTable::FockBasisTable(const QuadratureGrid& grid, double omega,
                               int l_trunc)
    : grid_(grid), omega_(omega), l_trunc_(l_trunc) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("FockBasisTable: omega must be positive");
  }
  if (l_trunc < 0) {
    throw std::invalid_argument("FockBasisTable: l_trunc must be >= 0");
  }
  const double root = std::sqrt(omega);
  Eigen::VectorXd x = grid.points() * root;
  values_.resize(grid.size(), l_trunc + 1);
  hermite_functions(x, l_trunc, values_);
  // psi_l(q) = omega^{1/4} h_l(sqrt(omega) q) keeps unit L2 norm in q.
  values_ *= std::sqrt(root);
}

FockBasisTable fock_table(const QuadratureGrid& grid, double omega,
                          int l_trunc) {
  return FockBasisTable(grid, omega, l_trunc);
}

namespace {
void require_omega(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("omega must be positive");
  }
}
}  // namespace

QumodeWavefunction ground_state(const QuadratureGrid& grid, double omega) {
  require_omega(omega);
  Eigen::VectorXd q = grid.points();
  Eigen::VectorXcd psi = (-0.5 * omega * q.array().square()).exp().cast<complex>();
  return QumodeWavefunction(grid, std::move(psi));
}

QumodeWavefunction displaced_ground_state(const QuadratureGrid& grid,
                                          double omega, double d) {
  require_omega(omega);
  if (!(std::abs(d) + 5.0 / std::sqrt(omega) < 0.5 * grid.extent())) {
    throw std::out_of_range("displaced_ground_state: displacement " +
                            std::to_string(d) + " does not fit on the grid");
  }
  Eigen::VectorXd q = grid.points();
  Eigen::VectorXcd psi =
      (-0.5 * omega * (q.array() - d).square()).exp().cast<complex>();
  return QumodeWavefunction(grid, std::move(psi));
}

Eigen::VectorXcd fock_decompose(const QumodeWavefunction& psi,
                                const FockBasisTable& table) {
  if (!(psi.grid() == table.grid())) {
    throw std::invalid_argument("fock_decompose: grid mismatch");
  }
  return psi.grid().spacing() *
         (table.values().transpose().cast<complex>() * psi.amplitudes());
}

QumodeWavefunction fock_compose(const Eigen::VectorXcd& coefficients,
                                const FockBasisTable& table) {
  if (coefficients.size() != table.levels()) {
    throw std::invalid_argument("fock_compose: coefficient count mismatch");
  }
  return QumodeWavefunction::unnormalized(
      table.grid(), table.values().cast<complex>() * coefficients);
}

}  // namespace cvlattice
