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
#include <numbers>
#include <stdexcept>

#include <doctest.h>

#include "cvlattice/qumode.hpp"

using namespace cvlattice;

namespace {

// Physicists' Hermite polynomials written out by hand, independent of the
// recurrence in the library.
double hermite_closed_form(int n, double x) {
  switch (n) {
    case 0: return 1.0;
    case 1: return 2.0 * x;
    case 2: return 4.0 * x * x - 2.0;
    case 3: return 8.0 * x * x * x - 12.0 * x;
    case 4: return 16.0 * std::pow(x, 4) - 48.0 * x * x + 12.0;
    case 5: return 32.0 * std::pow(x, 5) - 160.0 * std::pow(x, 3) + 120.0 * x;
  }
  throw std::logic_error("not tabulated");
}

// <q|n> for an oscillator of frequency omega.
double sho_eigenfunction(int n, double omega, double q) {
  const double x = std::sqrt(omega) * q;
  const double norm = std::pow(omega / std::numbers::pi, 0.25) /
                      std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0));
  return norm * hermite_closed_form(n, x) * std::exp(-0.5 * x * x);
}

}  // namespace

TEST_CASE("grid points and spacing") {
  const QuadratureGrid grid(200, 20.0);
  CHECK(grid.size() == 200);
  CHECK(grid.spacing() == doctest::Approx(0.1));
  CHECK(grid.point(0) == doctest::Approx(-10.0));
  CHECK(grid.point(100) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(grid.points()[199] == doctest::Approx(9.9));
  CHECK_THROWS_AS(QuadratureGrid(1, 20.0), std::invalid_argument);
  CHECK_THROWS_AS(QuadratureGrid(10, -1.0), std::invalid_argument);
}

TEST_CASE("wavenumbers follow FFT ordering") {
  const QuadratureGrid grid(8, 8.0);
  const Eigen::VectorXd k = grid.wavenumbers();
  const double dk = 2.0 * std::numbers::pi / 8.0;
  CHECK(k[0] == 0.0);
  CHECK(k[1] == doctest::Approx(dk));
  CHECK(k[3] == doctest::Approx(3 * dk));
  CHECK(k[4] == doctest::Approx(-4 * dk));
  CHECK(k[7] == doctest::Approx(-dk));
}

TEST_CASE("Fock table matches closed-form Hermite functions") {
  const QuadratureGrid grid(200, 20.0);
  for (const double omega : {0.6, 1.0, 2.3}) {
    const FockBasisTable table = fock_table(grid, omega, 10);
    for (int n = 0; n <= 5; ++n) {
      for (int j = 0; j < grid.size(); j += 7) {
        CHECK(table.values()(j, n) ==
              doctest::Approx(sho_eigenfunction(n, omega, grid.point(j)))
                  .epsilon(1e-10)
                  .scale(1.0));
      }
    }
  }
}

TEST_CASE("Fock table is orthonormal for levels the grid resolves") {
  const QuadratureGrid grid(200, 20.0);
  const FockBasisTable table = fock_table(grid, 1.0);
  const Eigen::MatrixXd gram =
      grid.spacing() * table.values().transpose() * table.values();
  CHECK(std::abs(gram(3, 5)) < 1e-12);
  for (int l = 0; l <= 20; ++l) {
    CHECK(gram(l, l) == doctest::Approx(1.0).epsilon(1e-10));
    for (int m = 0; m < l; ++m) CHECK(std::abs(gram(l, m)) < 1e-10);
  }
}

TEST_CASE("a wider grid resolves the full default truncation") {
  // Level 80 turns around near q = 12.7, beyond the default +-10 window.
  const QuadratureGrid grid(300, 30.0);
  const FockBasisTable table = fock_table(grid, 1.0, kDefaultFockTruncation);
  const Eigen::MatrixXd gram =
      grid.spacing() * table.values().transpose() * table.values();
  CHECK((gram - Eigen::MatrixXd::Identity(81, 81)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("recurrence stays finite at the default truncation") {
  const QuadratureGrid grid(200, 20.0);
  const FockBasisTable table = fock_table(grid, 1.0, kDefaultFockTruncation);
  CHECK(table.levels() == 81);
  CHECK(table.values().allFinite());
}

TEST_CASE("ground state moments") {
  const QuadratureGrid grid(200, 20.0);
  for (const double omega : {0.6, 1.0, 1.7}) {
    const QumodeWavefunction psi = ground_state(grid, omega);
    CHECK(psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(psi.mean_q()) < 1e-12);
    CHECK(psi.mean_q2() == doctest::Approx(0.5 / omega).epsilon(1e-10));
    CHECK(psi.mean_p2() == doctest::Approx(0.5 * omega).epsilon(1e-10));
  }
}

TEST_CASE("displaced ground state") {
  const QuadratureGrid grid(200, 20.0);
  const QumodeWavefunction psi = displaced_ground_state(grid, 1.0, 1.5);
  CHECK(psi.mean_q() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(psi.mean_q2() == doctest::Approx(0.5 + 2.25).epsilon(1e-10));
  CHECK(psi.mean_p2() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(displaced_ground_state(grid, 1.0, 5.0), std::out_of_range);
  CHECK_THROWS_AS(displaced_ground_state(grid, 1.0, -5.5), std::out_of_range);
}

TEST_CASE("constructor normalizes, unnormalized does not") {
  const QuadratureGrid grid(50, 10.0);
  const Eigen::VectorXcd raw = Eigen::VectorXcd::Constant(50, complex(2.0, 1.0));
  const QumodeWavefunction a(grid, raw);
  CHECK(a.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  QumodeWavefunction b = QumodeWavefunction::unnormalized(grid, raw);
  CHECK(b.norm_squared() == doctest::Approx(0.2 * 50 * 5.0));
  const double before = b.renormalize();
  CHECK(before == doctest::Approx(50.0));
  CHECK(b.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(QumodeWavefunction(grid, Eigen::VectorXcd::Zero(50)),
                  std::invalid_argument);
  CHECK_THROWS_AS(QumodeWavefunction(grid, Eigen::VectorXcd::Zero(49)),
                  std::invalid_argument);
}

TEST_CASE("displaced ground state has Poisson Fock statistics") {
  const QuadratureGrid grid(200, 20.0);
  const double omega = 1.3;
  const double d = 1.2;
  const FockBasisTable table = fock_table(grid, omega, 30);
  const Eigen::VectorXcd c =
      fock_decompose(displaced_ground_state(grid, omega, d), table);
  // |alpha|^2 = omega d^2 / 2 for a real q displacement.
  const double mean = 0.5 * omega * d * d;
  double poisson = std::exp(-mean);
  for (int n = 0; n <= 15; ++n) {
    CHECK(std::norm(c[n]) == doctest::Approx(poisson).epsilon(1e-9).scale(1.0));
    poisson *= mean / (n + 1);
  }
}

TEST_CASE("Fock decompose and compose invert each other") {
  const QuadratureGrid grid(200, 20.0);
  const FockBasisTable table = fock_table(grid, 1.0);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(table.levels());
  c[0] = complex(0.6, 0.0);
  c[1] = complex(0.0, 0.48);
  c[4] = complex(-0.64, 0.0);
  const QumodeWavefunction psi = fock_compose(c, table);
  CHECK(psi.norm_squared() == doctest::Approx(c.squaredNorm()).epsilon(1e-12));
  const Eigen::VectorXcd back = fock_decompose(psi, table);
  CHECK((back - c).norm() < 1e-12);
}
