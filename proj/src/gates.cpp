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

#include "cvlattice/gates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fft_plan.hpp"

namespace cvlattice {

namespace {

constexpr complex kI{0.0, 1.0};

// cos(2 pi alpha / N) evaluated on min(alpha, N - alpha) so that the
// alpha <-> N - alpha symmetry holds bit for bit.
double momentum_cosine(int alpha, int n_sites) {
  const int folded = std::min(alpha, n_sites - alpha);
  return std::cos(2.0 * std::numbers::pi * folded / n_sites);
}

double inverse_square(double spacing) {
  return std::isinf(spacing) ? 0.0 : 1.0 / (spacing * spacing);
}

}  // namespace

// ---------------------------------------------------------------------------
// Rotation

RotationGate::RotationGate(const FockBasisTable& table, double dt)
    : omega_(table.omega()),
      dt_(dt),
      spacing_(table.grid().spacing()),
      basis_(table.values()),
      level_phases_(table.levels()) {
  for (int l = 0; l < table.levels(); ++l) {
    level_phases_[l] = std::exp(-kI * (dt * omega_ * (l + 0.5)));
  }
  const Eigen::MatrixXcd basis_c = basis_.cast<complex>();
  matrix_ = spacing_ * (basis_c * level_phases_.asDiagonal()) *
            basis_c.transpose();
}

namespace {

// Applies xi * Phi diag(phases) Phi^T to each of `rows` interleaved complex
// rows stored column-major with leading dimension `rows`. Viewing the complex
// data as a (2*rows) x M real matrix turns both contractions into real GEMMs.
void rotate_rows(complex* data, Eigen::Index rows, Eigen::Index m,
                 const Eigen::MatrixXd& basis, const Eigen::VectorXcd& phases,
                 double spacing) {
  Eigen::Map<Eigen::MatrixXd> real_view(reinterpret_cast<double*>(data),
                                        2 * rows, m);
  Eigen::MatrixXd coeffs(2 * rows, basis.cols());
  coeffs.noalias() = real_view * basis;
  Eigen::Map<Eigen::MatrixXcd> coeff_view(
      reinterpret_cast<complex*>(coeffs.data()), rows, basis.cols());
  for (Eigen::Index l = 0; l < basis.cols(); ++l) {
    coeff_view.col(l) *= spacing * phases[l];
  }
  real_view.noalias() = coeffs * basis.transpose();
}

}  // namespace

void RotationGate::apply(Eigen::Ref<Eigen::VectorXcd> psi) const {
  if (psi.size() != basis_.rows()) {
    throw std::invalid_argument("RotationGate: grid size mismatch");
  }
  rotate_rows(psi.data(), 1, psi.size(), basis_, level_phases_, spacing_);
}

void RotationGate::apply(SiteBlock& sites) const {
  if (sites.cols() != basis_.rows()) {
    throw std::invalid_argument("RotationGate: grid size mismatch");
  }
  rotate_rows(sites.data(), sites.rows(), sites.cols(), basis_, level_phases_,
              spacing_);
}

RotationGate build_rotation(const FockBasisTable& table, double dt) {
  return RotationGate(table, dt);
}

// ---------------------------------------------------------------------------
// Potential phase

PotentialPhase::PotentialPhase(Eigen::VectorXcd diagonal)
    : diagonal_(std::move(diagonal)) {}

void PotentialPhase::apply(Eigen::Ref<Eigen::VectorXcd> psi) const {
  psi.array() *= diagonal_.array();
}

void PotentialPhase::apply(SiteBlock& sites) const {
  sites = sites * diagonal_.asDiagonal();
}

PotentialPhase build_potential_phase(const QuadratureGrid& grid,
                                     const Potential& potential, double dt) {
  Eigen::VectorXcd diagonal(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const double v = potential(grid.point(j));
    if (!std::isfinite(v)) {
      throw std::invalid_argument("build_potential_phase: potential is not "
                                  "finite at q = " +
                                  std::to_string(grid.point(j)));
    }
    diagonal[j] = std::exp(-kI * (dt * v));
  }
  return PotentialPhase(std::move(diagonal));
}

// ---------------------------------------------------------------------------
// Hopping

HopPhases::HopPhases(const QuadratureGrid& grid, int n_sites, double spacing,
                     double dt)
    : n_sites_(n_sites), spacing_(spacing), dt_(dt) {
  if (n_sites < 2) {
    throw std::invalid_argument("HopPhases: need at least 2 lattice sites");
  }
  if (!(spacing > 0.0)) {
    throw std::invalid_argument("HopPhases: spacing must be positive");
  }
  const double inv_a2 = inverse_square(spacing);
  const int m = grid.size();
  phases_.resize(n_sites, m);
  for (int j = 0; j < m; ++j) {
    const double q2 = grid.point(j) * grid.point(j);
    for (int alpha = 0; alpha < n_sites; ++alpha) {
      phases_(alpha, j) =
          std::exp(kI * (dt * momentum_cosine(alpha, n_sites) * q2 * inv_a2));
    }
  }
  // One transform of length N per grid column; columns are contiguous.
  to_momentum_ = std::make_shared<detail::BatchedFft>(n_sites, m, 1, n_sites,
                                                      FFTW_BACKWARD);
  to_position_ = std::make_shared<detail::BatchedFft>(n_sites, m, 1, n_sites,
                                                      FFTW_FORWARD);
}

void HopPhases::apply(SiteBlock& sites) const {
  if (sites.rows() != n_sites_ || sites.cols() != phases_.cols()) {
    throw std::invalid_argument("HopPhases: block shape mismatch");
  }
  to_momentum_->execute(sites.data());
  sites.array() *= phases_.array();
  to_position_->execute(sites.data());
  sites *= 1.0 / n_sites_;
}

HopPhases build_hop_phases(const QuadratureGrid& grid, int n_sites,
                           double spacing, double dt) {
  return HopPhases(grid, n_sites, spacing, dt);
}

Eigen::MatrixXcd dense_hop_matrix(int n_sites, double spacing, double dt,
                                  double q) {
  Eigen::MatrixXcd u(n_sites, n_sites);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n_sites));
  for (int alpha = 0; alpha < n_sites; ++alpha) {
    for (int m = 0; m < n_sites; ++m) {
      const double angle =
          2.0 * std::numbers::pi * ((static_cast<long>(alpha) * m) % n_sites) /
          n_sites;
      u(alpha, m) = norm * std::exp(kI * angle);
    }
  }
  Eigen::VectorXcd c(n_sites);
  const double inv_a2 = inverse_square(spacing);
  for (int alpha = 0; alpha < n_sites; ++alpha) {
    c[alpha] = std::exp(kI * (dt * momentum_cosine(alpha, n_sites) * q * q *
                              inv_a2));
  }
  return u.adjoint() * c.asDiagonal() * u;
}

// ---------------------------------------------------------------------------
// Site-level helpers

double renormalize_sites(SiteBlock& sites, double spacing) {
  Eigen::VectorXd norms = spacing * sites.rowwise().squaredNorm();
  double drift = 0.0;
  for (Eigen::Index n = 0; n < norms.size(); ++n) {
    if (!std::isfinite(norms[n]) || !(norms[n] > 0.0)) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    drift = std::max(drift, std::abs(norms[n] - 1.0));
  }
  sites = norms.cwiseSqrt().cwiseInverse().asDiagonal() * sites;
  return drift;
}

DiagonalStepResult apply_diagonal_step(const QumodeWavefunction& psi,
                                       const RotationGate& rotation,
                                       const PotentialPhase& potential) {
  if (potential.diagonal().size() != psi.size()) {
    throw std::invalid_argument("apply_diagonal_step: grid size mismatch");
  }
  QumodeWavefunction out = psi;
  potential.apply(out.amplitudes());
  rotation.apply(out.amplitudes());
  const double n2 = out.renormalize();
  return {std::move(out), std::abs(n2 - 1.0)};
}

SiteBlock pack_sites(std::span<const QumodeWavefunction> sites) {
  if (sites.empty()) {
    throw std::invalid_argument("pack_sites: no sites");
  }
  const QuadratureGrid& grid = sites.front().grid();
  SiteBlock block(static_cast<Eigen::Index>(sites.size()), grid.size());
  for (std::size_t n = 0; n < sites.size(); ++n) {
    if (!(sites[n].grid() == grid)) {
      throw std::invalid_argument("pack_sites: sites use different grids");
    }
    block.row(static_cast<Eigen::Index>(n)) = sites[n].amplitudes().transpose();
  }
  return block;
}

HopResult apply_hop(std::span<const QumodeWavefunction> sites,
                    const HopPhases& hop) {
  if (static_cast<int>(sites.size()) != hop.lattice_sites()) {
    throw std::invalid_argument("apply_hop: expected " +
                                std::to_string(hop.lattice_sites()) +
                                " sites, got " + std::to_string(sites.size()));
  }
  SiteBlock block = pack_sites(sites);
  const QuadratureGrid grid = sites.front().grid();
  hop.apply(block);
  HopResult result{{}, renormalize_sites(block, grid.spacing())};
  result.sites.reserve(sites.size());
  for (Eigen::Index n = 0; n < block.rows(); ++n) {
    result.sites.push_back(
        QumodeWavefunction::unnormalized(grid, block.row(n).transpose()));
  }
  return result;
}

}  // namespace cvlattice
