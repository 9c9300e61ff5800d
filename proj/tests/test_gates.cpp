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

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "cvlattice/gates.hpp"
#include "cvlattice/potentials.hpp"

using namespace cvlattice;

namespace {

SiteBlock random_block(int n_sites, const QuadratureGrid& grid,
                       unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  SiteBlock block(n_sites, grid.size());
  for (int n = 0; n < n_sites; ++n) {
    for (int j = 0; j < grid.size(); ++j) {
      const double envelope = std::exp(-0.25 * grid.point(j) * grid.point(j));
      block(n, j) = envelope * complex(normal(rng), normal(rng));
    }
  }
  renormalize_sites(block, grid.spacing());
  return block;
}

}  // namespace

TEST_CASE("rotation gate phases each Fock level") {
  const QuadratureGrid grid(200, 20.0);
  const double omega = 1.0;
  const double dt = 0.37;
  const FockBasisTable table = fock_table(grid, omega);
  const RotationGate gate(table, dt);
  for (const int l : {0, 1, 5, 12, 20}) {
    Eigen::VectorXcd psi = table.column(l).cast<complex>();
    gate.apply(psi);
    const complex phase = std::polar(1.0, -dt * omega * (l + 0.5));
    CHECK((psi - phase * table.column(l).cast<complex>()).norm() *
              std::sqrt(grid.spacing()) <
          1e-8);
  }
}

TEST_CASE("rotation gate block and vector paths agree") {
  const QuadratureGrid grid(64, 12.0);
  const RotationGate gate(fock_table(grid, 0.8, 30), 0.05);
  SiteBlock block = random_block(5, grid, 1);
  SiteBlock expected = block;
  for (int n = 0; n < 5; ++n) {
    Eigen::VectorXcd row = expected.row(n).transpose();
    gate.apply(row);
    expected.row(n) = row.transpose();
  }
  gate.apply(block);
  CHECK((block - expected).cwiseAbs().maxCoeff() < 1e-13);
  const Eigen::VectorXcd dense =
      gate.matrix() * random_block(1, grid, 1).row(0).transpose();
  CHECK((dense - expected.row(0).transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("harmonic rotation obeys Ehrenfest: <q>(t) = d cos(omega t)") {
  const QuadratureGrid grid(200, 20.0);
  const double omega = 1.0;
  const double d = 1.0;
  const double dt = 0.01;
  const RotationGate gate(fock_table(grid, omega), dt);
  QumodeWavefunction psi = displaced_ground_state(grid, omega, d);
  for (int s = 1; s <= 1000; ++s) {
    gate.apply(psi.amplitudes());
    if (s % 100 == 0) {
      CHECK(psi.mean_q() ==
            doctest::Approx(d * std::cos(omega * s * dt)).scale(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("diagonal step on a displaced state barely changes the norm") {
  const QuadratureGrid grid(200, 20.0);
  const double dt = 0.01;
  const RotationGate rotation(fock_table(grid, 1.0), dt);
  const PotentialPhase phase =
      build_potential_phase(grid, phi4_interaction(0.8), dt);
  const DiagonalStepResult r =
      apply_diagonal_step(displaced_ground_state(grid, 1.0, 1.0), rotation, phase);
  CHECK(r.drift < 1e-6);
  CHECK(r.psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("potential phase is unit modulus and rejects non-finite potentials") {
  const QuadratureGrid grid(100, 10.0);
  const PotentialPhase phase =
      build_potential_phase(grid, phi4_interaction(0.4), 0.01);
  CHECK((phase.diagonal().cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-15);
  CHECK(std::abs(phase.diagonal()[30] -
                 std::polar(1.0, -0.01 * 0.4 / 24.0 *
                                     std::pow(grid.point(30), 4))) < 1e-15);
  CHECK_THROWS_AS(
      build_potential_phase(grid, [](double q) { return std::log(q); }, 0.01),
      std::invalid_argument);
}

TEST_CASE("two-site hop has the closed form [[cos, i sin], [i sin, cos]]") {
  for (const double q : {0.0, 0.7, -2.5}) {
    const double a = 1.3;
    const double dt = 0.2;
    const double theta = dt * q * q / (a * a);
    const Eigen::MatrixXcd u = dense_hop_matrix(2, a, dt, q);
    const complex c(std::cos(theta), 0.0);
    const complex s(0.0, std::sin(theta));
    CHECK(std::abs(u(0, 0) - c) < 1e-14);
    CHECK(std::abs(u(1, 1) - c) < 1e-14);
    CHECK(std::abs(u(0, 1) - s) < 1e-14);
    CHECK(std::abs(u(1, 0) - s) < 1e-14);
  }
}

TEST_CASE("dense hop matrix is unitary and symmetric circulant") {
  for (int n = 2; n <= 8; ++n) {
    const Eigen::MatrixXcd u = dense_hop_matrix(n, 1.0, 0.3, 1.7);
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).norm() < 1e-13);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        CHECK(std::abs(u(i, j) - u((i + 1) % n, (j + 1) % n)) < 1e-14);
        CHECK(std::abs(u(i, j) - u(j, i)) < 1e-14);
      }
    }
  }
}

TEST_CASE("FFT hop agrees with the dense matrix for N <= 8") {
  const QuadratureGrid grid(40, 10.0);
  for (int n = 2; n <= 8; ++n) {
    for (const double a : {1.0, 0.7}) {
      const double dt = 0.05;
      const HopPhases hop(grid, n, a, dt);
      SiteBlock block = random_block(n, grid, 10 + n);
      SiteBlock expected(n, grid.size());
      for (int j = 0; j < grid.size(); ++j) {
        expected.col(j) = dense_hop_matrix(n, a, dt, grid.point(j)) * block.col(j);
      }
      hop.apply(block);
      CHECK((block - expected).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("hop phases carry exp(+i dt cos(2 pi alpha / N) q^2 / a^2)") {
  const QuadratureGrid grid(20, 8.0);
  const HopPhases hop(grid, 6, 1.0, 0.1);
  for (int alpha = 0; alpha < 6; ++alpha) {
    const double q = grid.point(3);
    const complex expected = std::polar(
        1.0, 0.1 * std::cos(2.0 * std::numbers::pi * alpha / 6.0) * q * q);
    CHECK(std::abs(hop.phases()(alpha, 3) - expected) < 1e-14);
  }
}

TEST_CASE("degenerate lattice: hop then q^2/a^2 phase is the identity") {
  const QuadratureGrid grid(200, 20.0);
  const double dt = 0.01;
  for (int n = 2; n <= 7; ++n) {
    for (const double a : {1.0, 0.5}) {
      const SiteBlock one = random_block(1, grid, 100 + n);
      SiteBlock block = one.replicate(n, 1);
      const HopPhases hop(grid, n, a, dt);
      const PotentialPhase remnant = build_potential_phase(
          grid, [a](double q) { return q * q / (a * a); }, dt);
      hop.apply(block);
      remnant.apply(block);
      for (int s = 0; s < n; ++s) {
        CHECK((block.row(s) - one.row(0)).cwiseAbs().maxCoeff() < 1e-8);
      }
    }
  }
}

TEST_CASE("apply_hop conserves the summed norm but moves it between sites") {
  const QuadratureGrid grid(200, 20.0);
  const HopPhases hop(grid, 2, 1.0, 0.01);
  SiteBlock block(2, grid.size());
  block.row(0) = displaced_ground_state(grid, 1.0, 1.0).amplitudes().transpose();
  block.row(1) = ground_state(grid, 1.0).amplitudes().transpose();
  // A half step of the SHO gives the sites different phases, which is what
  // lets the hop move weight between them.
  RotationGate(fock_table(grid, 1.0), 0.5).apply(block);
  SiteBlock raw = block;
  hop.apply(raw);
  const Eigen::VectorXd norms = grid.spacing() * raw.rowwise().squaredNorm();
  CHECK(norms.sum() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(norms[0] - 1.0) > 1e-6);

  std::vector<QumodeWavefunction> sites;
  for (int n = 0; n < 2; ++n) {
    sites.push_back(QumodeWavefunction::unnormalized(
        grid, block.row(n).transpose()));
  }
  const HopResult r = apply_hop(sites, hop);
  CHECK(r.max_drift == doctest::Approx(std::abs(norms[0] - 1.0)).epsilon(1e-10));
  for (const QumodeWavefunction& s : r.sites) {
    CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("decoupled limit: infinite spacing leaves the block unchanged") {
  const QuadratureGrid grid(60, 10.0);
  const double inf = std::numeric_limits<double>::infinity();
  const HopPhases hop(grid, 4, inf, 0.01);
  SiteBlock block = random_block(4, grid, 7);
  const SiteBlock before = block;
  hop.apply(block);
  CHECK((block - before).cwiseAbs().maxCoeff() < 1e-14);
}
