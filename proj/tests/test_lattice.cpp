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

#include <doctest.h>

#include "cvlattice/lattice.hpp"
#include "cvlattice/oracle.hpp"
#include "cvlattice/state_prep.hpp"

using namespace cvlattice;

namespace {

SimulationParams small_params(int n_sites) {
  SimulationParams p;
  p.n_sites = n_sites;
  p.spacing = 1.0;
  p.mass = 1.0;
  p.dt = 0.01;
  p.total_time = 1.0;
  p.record_stride = 10;
  return p;
}

LatticeState with_displacements(const SimulationParams& p,
                                const Eigen::VectorXd& d) {
  return displaced_lattice(LatticeState::vacuum(p), d);
}

SiteBlock cyclic_shift(const SiteBlock& block, int s) {
  const int n = static_cast<int>(block.rows());
  SiteBlock out(block.rows(), block.cols());
  for (int i = 0; i < n; ++i) out.row((i + s) % n) = block.row(i);
  return out;
}

}  // namespace

TEST_CASE("params validation and step count") {
  SimulationParams p = small_params(4);
  CHECK(p.steps() == 100);
  p.total_time = 1.005;
  CHECK_THROWS_AS(p.steps(), std::invalid_argument);
  p.total_time = 1.0;
  p.n_sites = 1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.n_sites = 4;
  p.coupling = -0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.coupling = 0.0;
  p.dt = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("field expectation of simple states") {
  const SimulationParams p = small_params(5);
  CHECK(field_expectation(LatticeState::vacuum(p)).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(5);
  d[2] = 1.3;
  const Eigen::VectorXd phi = field_expectation(with_displacements(p, d));
  CHECK((phi - d).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("vacuum is stationary in the free theory") {
  SimulationParams p = small_params(6);
  p.total_time = 5.0;
  LatticeState state = LatticeState::vacuum(p);
  const ObservableSeries series = evolve(state);
  CHECK(series.field_vev.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ground-state energy density matches Gaussian moments") {
  for (const double omega : {0.6, 1.0, 1.5}) {
    for (const double a : {1.0, 0.8}) {
      SimulationParams p = small_params(4);
      p.mass = omega;
      p.spacing = a;
      const Eigen::VectorXd e = energy_density(LatticeState::vacuum(p));
      // <p^2>/2 + omega^2 <q^2>/2 = omega/2; each of the two half bonds
      // contributes (1/2a^2)(1/omega)/2.
      const double expected = 0.5 * omega + 0.5 / (a * a * omega);
      for (int n = 0; n < 4; ++n) {
        CHECK(e[n] == doctest::Approx(expected).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("coherent energy of one displaced site in the decoupled limit") {
  for (const double omega : {1.0, 0.7}) {
    SimulationParams p = small_params(3);
    p.spacing = std::numeric_limits<double>::infinity();
    p.mass = omega;
    const double d = 1.2;
    Eigen::VectorXd disp = Eigen::VectorXd::Zero(3);
    disp[0] = d;
    const Eigen::VectorXd e = energy_density(with_displacements(p, disp));
    CHECK(e[0] == doctest::Approx(0.5 * omega + 0.5 * omega * omega * d * d)
                      .epsilon(1e-10));
    CHECK(e.sum() == doctest::Approx(1.5 * omega + 0.5 * omega * omega * d * d)
                         .epsilon(1e-10));
  }
}

TEST_CASE("zero-step run returns only the initial observables") {
  SimulationParams p = small_params(3);
  p.total_time = 0.0;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(3);
  d[1] = 0.5;
  LatticeState state = with_displacements(p, d);
  const ObservableSeries series = evolve(state);
  REQUIRE(series.times.size() == 1);
  CHECK(series.times[0] == 0.0);
  CHECK(series.norm_drift.empty());
  CHECK((series.field_vev.row(0).transpose() - d).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("evolution is deterministic") {
  SimulationParams p = small_params(5);
  p.coupling = 0.4;
  Eigen::VectorXd d(5);
  d << 0.3, -0.2, 0.9, 0.0, 0.1;
  LatticeState a = with_displacements(p, d);
  LatticeState b = with_displacements(p, d);
  const ObservableSeries sa = evolve(a);
  const ObservableSeries sb = evolve(b);
  CHECK(sa.field_vev == sb.field_vev);
  CHECK(a.sites() == b.sites());
  CHECK(a.time() == doctest::Approx(1.0));
}

TEST_CASE("translation covariance") {
  SimulationParams p = small_params(7);
  p.coupling = 0.8;
  Eigen::VectorXd d(7);
  d << 0.8, -0.3, 0.0, 0.5, 0.1, 0.0, -0.6;
  LatticeState base = with_displacements(p, d);
  for (const int s : {1, 3}) {
    LatticeState shifted(p, cyclic_shift(base.sites(), s));
    LatticeState reference = base;
    const ObservableSeries a = evolve(reference);
    const ObservableSeries b = evolve(shifted);
    for (int n = 0; n < 7; ++n) {
      CHECK((a.field_vev.col(n) - b.field_vev.col((n + s) % 7))
                .cwiseAbs()
                .maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("reflection symmetry of mirror-symmetric data") {
  SimulationParams p = small_params(8);
  p.coupling = 0.4;
  p.total_time = 2.0;
  // Mirror axis through site 0: n <-> -n mod 8.
  Eigen::VectorXd d(8);
  d << 0.9, 0.4, -0.2, 0.1, 0.3, 0.1, -0.2, 0.4;
  LatticeState state = with_displacements(p, d);
  const ObservableSeries series = evolve(state);
  for (int n = 1; n < 8; ++n) {
    CHECK((series.field_vev.col(n) - series.field_vev.col(8 - n))
              .cwiseAbs()
              .maxCoeff() < 1e-8);
  }
}

TEST_CASE("trotter_step advances time and keeps every site unit norm") {
  SimulationParams p = small_params(4);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(4);
  d[0] = 1.0;
  const LatticeState next = trotter_step(with_displacements(p, d));
  CHECK(next.time() == doctest::Approx(0.01));
  for (int n = 0; n < 4; ++n) {
    CHECK(next.site(n).norm_squared() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("non-finite state raises NumericalFailure") {
  SimulationParams p = small_params(3);
  LatticeState state = LatticeState::vacuum(p);
  state.sites()(1, 50) = complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(evolve(state), NumericalFailure);
}

TEST_CASE("degenerate anharmonic lattice follows the single-qumode evolution") {
  SimulationParams p = small_params(6);
  p.coupling = 0.8;
  p.total_time = 2.0;
  LatticeState state = displaced_lattice(LatticeState::vacuum(p),
                                         Eigen::VectorXd::Constant(6, 1.0));
  const QuadratureGrid grid = p.make_grid();
  QumodeWavefunction single = displaced_ground_state(grid, 1.0, 1.0);
  const RotationGate rotation(fock_table(grid, 1.0), p.dt);
  const PotentialPhase interaction =
      build_potential_phase(grid, phi4_interaction(0.8), p.dt);
  const TrotterEngine engine(p);
  for (long s = 0; s < p.steps(); ++s) {
    engine.step(state);
    single = apply_diagonal_step(single, rotation, interaction).psi;
  }
  for (int n = 0; n < 6; ++n) {
    CHECK((state.sites().row(n).transpose() - single.amplitudes())
              .cwiseAbs()
              .maxCoeff() < 1e-8);
  }
}

TEST_CASE("three sites, one displaced: per-site fidelity against the exact "
          "tensor-product evolution") {
  SimulationParams p = small_params(3);
  p.total_time = 1.0;
  const int cutoff = 12;
  const double d = 1.0;
  Eigen::VectorXd disp = Eigen::VectorXd::Zero(3);
  disp[0] = d;
  LatticeState state = with_displacements(p, disp);
  evolve(state);

  const Eigen::VectorXcd vacuum = coherent_state_coefficients(0.0, cutoff);
  const Eigen::VectorXcd coherent =
      coherent_state_coefficients(d * std::sqrt(0.5), cutoff);
  const FewSiteResult exact =
      exact_few_site(p, cutoff, {coherent, vacuum, vacuum}, 1.0);
  const FockBasisTable table = fock_table(p.make_grid(), 1.0, cutoff);
  for (int n = 0; n < 3; ++n) {
    const Eigen::VectorXcd c = fock_decompose(state.site(n), table);
    const double fidelity = (c.adjoint() * exact.reduced[n] * c)(0, 0).real();
    INFO("site " << n << " fidelity " << fidelity);
    CHECK(fidelity >= 0.999);
  }
}
