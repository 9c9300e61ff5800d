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

#include "cvlattice/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace cvlattice {

namespace {

double inverse_square(double spacing) {
  return std::isinf(spacing) ? 0.0 : 1.0 / (spacing * spacing);
}

}  // namespace

// ---------------------------------------------------------------------------
// Free-field references

double mode_frequency(int alpha, int n_sites, double spacing, double omega) {
  const int folded = std::min(alpha, n_sites - alpha);
  if (folded == 0) return omega;
  const double s = std::sin(std::numbers::pi * folded / n_sites);
  return std::sqrt(omega * omega + 4.0 * inverse_square(spacing) * s * s);
}

DispersionTable dispersion(int n_sites, double spacing, double omega) {
  if (n_sites < 1) throw std::invalid_argument("dispersion: n_sites < 1");
  DispersionTable table;
  table.omegas.resize(n_sites);
  table.momenta.resize(n_sites);
  for (int alpha = 0; alpha < n_sites; ++alpha) {
    table.omegas[alpha] = mode_frequency(alpha, n_sites, spacing, omega);
    table.momenta[alpha] =
        2.0 * std::numbers::pi * alpha / (spacing * n_sites);
  }
  return table;
}

double bessel_j0(double x) {
  const double ax = std::abs(x);
  if (ax <= 20.0) {
    // Terms peak near k ~ x/2 at ~1e7 for x = 20; long double keeps the
    // cancellation error around 1e-12.
    const long double y = 0.25L * ax * ax;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
      term *= -y / (static_cast<long double>(k) * k);
      sum += term;
      if (std::abs(term) < 1e-22L * std::max(1.0L, std::abs(sum))) break;
    }
    return static_cast<double>(sum);
  }
  // Hankel: J0 = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - pi/4.
  // For order zero a_k = (-1)^k prod_{j<=k} (2j-1)^2 / (k! 8^k); below `a`
  // is the magnitude and the odd-k sign is folded into the final sum. The
  // series is asymptotic, so stop at the smallest term.
  double p = 0.0;
  double q = 0.0;
  double a = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 60; ++k) {
    const double term = a / std::pow(ax, k);
    if (term > last || term < 1e-18) break;
    last = term;
    const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * term;
    } else {
      q += sign * term;
    }
    const double odd = 2.0 * k + 1.0;
    a *= odd * odd / (8.0 * (k + 1));
  }
  const double chi = ax - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * ax)) *
         (p * std::cos(chi) + q * std::sin(chi));
}

double retarded_propagator(double mass, double x, double t) {
  if (!(t > 0.0)) return 0.0;
  const double s2 = t * t - x * x;
  if (s2 < 0.0) return 0.0;
  return 0.5 * bessel_j0(mass * std::sqrt(s2));
}

// ---------------------------------------------------------------------------
// Exact single qumode

Eigen::MatrixXd spectral_kinetic_matrix(const QuadratureGrid& grid) {
  const int m = grid.size();
  const Eigen::VectorXd k = grid.wavenumbers();
  // K_{jl} depends on j - l only; precompute the circulant row.
  Eigen::VectorXd row(m);
  for (int d = 0; d < m; ++d) {
    double acc = 0.0;
    for (int s = 0; s < m; ++s) {
      acc += 0.5 * k[s] * k[s] *
             std::cos(2.0 * std::numbers::pi * static_cast<double>(s) * d / m);
    }
    row[d] = acc / m;
  }
  Eigen::MatrixXd kinetic(m, m);
  for (int j = 0; j < m; ++j) {
    for (int l = 0; l < m; ++l) kinetic(j, l) = row[(j - l + m) % m];
  }
  return kinetic;
}

ExactSingleQumode::ExactSingleQumode(const QuadratureGrid& grid, double omega,
                                     const Potential& potential)
    : grid_(grid) {
  Eigen::MatrixXd h = spectral_kinetic_matrix(grid);
  for (int j = 0; j < grid.size(); ++j) {
    const double q = grid.point(j);
    h(j, j) += 0.5 * omega * omega * q * q + potential(q);
  }
  if (!h.allFinite()) {
    throw std::invalid_argument("ExactSingleQumode: non-finite Hamiltonian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("ExactSingleQumode: diagonalization failed");
  }
  energies_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

QumodeWavefunction ExactSingleQumode::evolve(const QumodeWavefunction& psi0,
                                             double t) const {
  if (!(psi0.grid() == grid_)) {
    throw std::invalid_argument("ExactSingleQumode::evolve: grid mismatch");
  }
  if (t == 0.0) return psi0;
  Eigen::VectorXcd c = eigenvectors_.transpose() * psi0.amplitudes();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c[i] *= std::polar(1.0, -energies_[i] * t);
  }
  return QumodeWavefunction(grid_, eigenvectors_ * c);
}

QumodeWavefunction exact_single_qumode(const QuadratureGrid& grid,
                                       double omega, const Potential& potential,
                                       const QumodeWavefunction& psi0,
                                       double t) {
  return ExactSingleQumode(grid, omega, potential).evolve(psi0, t);
}

Eigen::VectorXcd coherent_state_coefficients(double alpha, int cutoff) {
  if (cutoff < 0) {
    throw std::invalid_argument("coherent_state_coefficients: cutoff < 0");
  }
  Eigen::VectorXcd c(cutoff + 1);
  c[0] = std::exp(-0.5 * alpha * alpha);
  for (int n = 1; n <= cutoff; ++n) c[n] = c[n - 1] * (alpha / std::sqrt(n));
  return c / c.norm();
}

// ---------------------------------------------------------------------------
// Exact few-site

namespace {

// Ladder-operator matrices of dimension d in the Fock basis of frequency
// omega; q = (a + a^dagger) / sqrt(2 omega).
Eigen::MatrixXd position_operator(int d, double omega) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(d, d);
  const double scale = 1.0 / std::sqrt(2.0 * omega);
  for (int n = 0; n + 1 < d; ++n) {
    q(n, n + 1) = q(n + 1, n) = scale * std::sqrt(n + 1.0);
  }
  return q;
}

long checked_power(int base, int exponent, long cap) {
  long out = 1;
  for (int i = 0; i < exponent; ++i) {
    out *= base;
    if (out > cap) return cap + 1;
  }
  return out;
}

}  // namespace

ExactFewSite::ExactFewSite(const SimulationParams& params, int fock_cutoff)
    : n_sites_(params.n_sites), local_dim_(fock_cutoff + 1) {
  params.validate();
  if (fock_cutoff < 1) {
    throw std::invalid_argument("ExactFewSite: fock_cutoff must be >= 1");
  }
  dimension_ = checked_power(local_dim_, n_sites_, kMaxDimension);
  if (dimension_ > kMaxDimension) {
    throw std::invalid_argument(
        "ExactFewSite: Hilbert space larger than " +
        std::to_string(kMaxDimension) + " (" + std::to_string(n_sites_) +
        " sites x " + std::to_string(local_dim_) + " levels)");
  }

  // Powers of q are formed in a padded basis and then truncated so that the
  // kept block holds exact matrix elements.
  const double omega = params.mass;
  const int d = local_dim_;
  const Eigen::MatrixXd q_big = position_operator(d + 4, omega);
  const Eigen::MatrixXd q2_big = q_big * q_big;
  const Eigen::MatrixXd q4_big = q2_big * q2_big;
  const Eigen::MatrixXd q = q_big.topLeftCorner(d, d);
  const double inv_a2 = inverse_square(params.spacing);

  Eigen::MatrixXd local = inv_a2 * q2_big.topLeftCorner(d, d) +
                          (params.coupling / 24.0) * q4_big.topLeftCorner(d, d);
  for (int n = 0; n < d; ++n) local(n, n) += omega * (n + 0.5);

  std::vector<long> stride(n_sites_);
  for (int s = 0; s < n_sites_; ++s) {
    stride[s] = checked_power(d, n_sites_ - 1 - s, kMaxDimension);
  }
  auto digit = [&](long index, int site) {
    return static_cast<int>((index / stride[site]) % d);
  };

  hamiltonian_ = Eigen::MatrixXd::Zero(dimension_, dimension_);
  for (long i = 0; i < dimension_; ++i) {
    for (int s = 0; s < n_sites_; ++s) {
      const int l = digit(i, s);
      const long base = i - l * stride[s];
      for (int lp = 0; lp < d; ++lp) {
        if (local(lp, l) != 0.0) hamiltonian_(base + lp * stride[s], i) += local(lp, l);
      }
    }
    // For two sites both periodic bonds join the same pair and add up.
    if (inv_a2 == 0.0) continue;
    for (int s = 0; s < n_sites_; ++s) {
      const int t = (s + 1) % n_sites_;
      const int ls = digit(i, s);
      const int lt = digit(i, t);
      const long base = i - ls * stride[s] - lt * stride[t];
      for (int ms = std::max(0, ls - 1); ms <= std::min(d - 1, ls + 1); ++ms) {
        if (q(ms, ls) == 0.0) continue;
        for (int mt = std::max(0, lt - 1); mt <= std::min(d - 1, lt + 1);
             ++mt) {
          if (q(mt, lt) == 0.0) continue;
          hamiltonian_(base + ms * stride[s] + mt * stride[t], i) -=
              inv_a2 * q(ms, ls) * q(mt, lt);
        }
      }
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian_);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("ExactFewSite: diagonalization failed");
  }
  energies_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Eigen::VectorXcd ExactFewSite::product_state(
    const std::vector<Eigen::VectorXcd>& site_states) const {
  if (static_cast<int>(site_states.size()) != n_sites_) {
    throw std::invalid_argument("ExactFewSite::product_state: expected " +
                                std::to_string(n_sites_) + " site states");
  }
  Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
  for (const Eigen::VectorXcd& raw : site_states) {
    if (raw.size() != local_dim_ || raw.norm() == 0.0) {
      throw std::invalid_argument(
          "ExactFewSite::product_state: site state has wrong size or is zero");
    }
    const Eigen::VectorXcd site = raw / raw.norm();
    Eigen::VectorXcd next(psi.size() * local_dim_);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      next.segment(i * local_dim_, local_dim_) = psi[i] * site;
    }
    psi = std::move(next);
  }
  return psi;
}

Eigen::VectorXcd ExactFewSite::evolve(const Eigen::VectorXcd& psi0,
                                      double t) const {
  if (psi0.size() != dimension_) {
    throw std::invalid_argument("ExactFewSite::evolve: dimension mismatch");
  }
  Eigen::VectorXcd c = eigenvectors_.transpose() * psi0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c[i] *= std::polar(1.0, -energies_[i] * t);
  }
  return eigenvectors_ * c;
}

Eigen::MatrixXcd ExactFewSite::reduced_density(const Eigen::VectorXcd& psi,
                                               int site) const {
  if (site < 0 || site >= n_sites_) {
    throw std::out_of_range("ExactFewSite::reduced_density: bad site");
  }
  const long inner = checked_power(local_dim_, n_sites_ - 1 - site,
                                   kMaxDimension);
  const long outer = checked_power(local_dim_, site, kMaxDimension);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(local_dim_, local_dim_);
  for (long o = 0; o < outer; ++o) {
    for (long in = 0; in < inner; ++in) {
      const long base = o * local_dim_ * inner + in;
      for (int l = 0; l < local_dim_; ++l) {
        const complex a = psi[base + l * inner];
        if (a == complex(0.0)) continue;
        for (int lp = 0; lp < local_dim_; ++lp) {
          rho(l, lp) += a * std::conj(psi[base + lp * inner]);
        }
      }
    }
  }
  return rho;
}

Eigen::VectorXd density_on_grid(const Eigen::MatrixXcd& reduced,
                                const FockBasisTable& table) {
  const Eigen::Index d = reduced.rows();
  if (reduced.cols() != d || d > table.levels()) {
    throw std::invalid_argument("density_on_grid: table has too few levels");
  }
  const Eigen::MatrixXcd phi = table.values().leftCols(d).cast<complex>();
  // rho(q_j) = sum_{l l'} phi_jl rho_ll' phi_jl'
  return (phi * reduced).cwiseProduct(phi).rowwise().sum().real();
}

FewSiteResult exact_few_site(const SimulationParams& params, int fock_cutoff,
                             const std::vector<Eigen::VectorXcd>& site_states,
                             double t) {
  const ExactFewSite system(params, fock_cutoff);
  const FockBasisTable table =
      fock_table(params.make_grid(), params.mass, fock_cutoff);
  FewSiteResult result;
  result.state = system.evolve(system.product_state(site_states), t);
  for (int s = 0; s < params.n_sites; ++s) {
    result.reduced.push_back(system.reduced_density(result.state, s));
    result.densities.push_back(density_on_grid(result.reduced.back(), table));
  }
  return result;
}

double density_l2_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                           double spacing) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("density_l2_distance: size mismatch");
  }
  return std::sqrt(spacing * (a - b).squaredNorm());
}

}  // namespace cvlattice
