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

// End-to-end acceptance runs. Prints one PASS/FAIL line per criterion with
// the measured numbers and exits nonzero if any criterion fails.
//
//   acceptance [--only NAME] [--out DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cvlattice/analysis.hpp"
#include "cvlattice/experiments.hpp"
#include "cvlattice/gates.hpp"
#include "cvlattice/lattice.hpp"
#include "cvlattice/oracle.hpp"
#include "cvlattice/state_prep.hpp"

using namespace cvlattice;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string out_root = "acceptance-out";

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

ExperimentConfig config_for(Experiment e, const std::string& tag) {
  ExperimentConfig c = default_config(e);
  c.output_dir = (fs::path(out_root) / tag).string();
  return c;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return "[" + s + "]";
}

SimulationParams free_lattice(int n_sites, double total_time, double dt) {
  SimulationParams p;
  p.n_sites = n_sites;
  p.spacing = 1.0;
  p.mass = 1.0;
  p.coupling = 0.0;
  p.dt = dt;
  p.total_time = total_time;
  p.record_stride = static_cast<int>(std::lround(1.0 / dt));
  return p;
}

// ---------------------------------------------------------------------------

Verdict single_qumode() {
  ExperimentConfig short_run = config_for(Experiment::kSingleQumode, "single-100");
  short_run.params.total_time = 100.0;
  short_run.single_qumode.times = {100.0};
  auto start = std::chrono::steady_clock::now();
  const double e100 = metric(run_single_qumode(short_run), "l2_rel@100");
  const double t100 = seconds_since(start);

  const ExperimentConfig long_run = config_for(Experiment::kSingleQumode, "single-400");
  start = std::chrono::steady_clock::now();
  const double e400 = metric(run_single_qumode(long_run), "l2_rel@400");
  const double t400 = seconds_since(start);

  const bool pass = e100 < 0.02 && t100 < 60.0 && e400 < 0.05 && t400 < 300.0;
  return {pass, "L2 rel error t=100 " + fmt(e100) + " (<0.02, " + fmt(t100) +
                    " s), t=400 " + fmt(e400) + " (<0.05, " + fmt(t400) + " s)"};
}

Verdict propagator() {
  const ExperimentConfig c = config_for(Experiment::kPropagator, "propagator");
  const auto start = std::chrono::steady_clock::now();
  const Metrics m = run_propagator(c);
  const double elapsed = seconds_since(start);
  const double causality = metric(m, "causality_ratio");
  const double r = metric(m, "slice_pearson");
  const bool pass = causality < 1e-3 && r >= 0.95 && elapsed < 900.0;
  return {pass, "outside-cone max/amplitude " + fmt(causality) +
                    " (<1e-3), slice Pearson vs J0/2 " + fmt(r) +
                    " (>=0.95), " + fmt(elapsed) + " s"};
}

Verdict degenerate() {
  const ExperimentConfig c = config_for(Experiment::kDegenerateCheck, "degenerate");
  const Metrics m = run_degenerate_check(c);
  const double inter = metric(m, "max_intersite_deviation");
  const double single = metric(m, "max_single_deviation");
  return {inter < 1e-8 && single < 1e-8,
          "N=32 lambda=0.8 1e4 steps: inter-site " + fmt(inter) +
              ", vs single qumode " + fmt(single) + " (<1e-8)"};
}

Verdict few_site() {
  std::vector<double> distance;
  for (const double dt : {0.01, 0.005, 0.0025}) {
    ExperimentConfig c =
        config_for(Experiment::kOracleCompare, "oracle-dt" + fmt(dt));
    c.params.dt = dt;
    c.params.record_stride = static_cast<int>(std::lround(0.1 / dt));
    distance.push_back(metric(run_oracle_compare(c), "max_distance"));
  }
  const bool pass = distance[0] < 0.05 && strictly_decreasing(distance);
  return {pass, "per-site density L2 distance at dt=0.01/0.005/0.0025 " +
                    join(distance) + " (<0.05 and decreasing)"};
}

Verdict energy() {
  std::vector<double> drift;
  for (const double dt : {0.01, 0.005}) {
    const SimulationParams p = free_lattice(100, 100.0, dt);
    LatticeState state = gaussian_wavepacket(LatticeState::vacuum(p),
                                             {50.0, 0.3, 0.09, 1.0});
    drift.push_back(relative_drift(evolve(state).total_energy));
  }
  const double reduction = drift[0] / drift[1];
  return {drift[0] < 0.01 && reduction >= 3.0,
          "relative total-energy drift dt=0.01 " + fmt(drift[0]) +
              " (<0.01), dt=0.005 " + fmt(drift[1]) + ", reduction " +
              fmt(reduction) + "x (>=3)"};
}

Verdict scattering() {
  std::vector<double> speeds;
  for (const double omega : {0.6, 0.8, 1.0}) {
    ExperimentConfig c =
        config_for(Experiment::kScattering, "scatter-mass" + fmt(omega));
    c.params.mass = omega;
    c.params.coupling = 0.2;
    speeds.push_back(metric(run_scattering(c), "centroid_speed"));
  }
  std::vector<double> collisions;
  for (const double lambda : {0.0, 0.4, 0.8}) {
    ExperimentConfig c =
        config_for(Experiment::kScattering, "scatter-coupling" + fmt(lambda));
    c.params.mass = 0.6;
    c.params.coupling = lambda;
    collisions.push_back(metric(run_scattering(c), "collision_time"));
  }
  const bool pass = strictly_decreasing(speeds) && strictly_increasing(collisions);
  return {pass, "centroid speed over omega 0.6/0.8/1.0 " + join(speeds) +
                    " (decreasing); collision time over lambda 0/0.4/0.8 " +
                    join(collisions) + " (increasing)"};
}

Verdict group_velocity() {
  const SimulationParams p = free_lattice(200, 100.0, 0.01);
  const double k = 0.3;
  LatticeState state =
      gaussian_wavepacket(LatticeState::vacuum(p), {60.0, k, 0.09, 1.0});
  const ObservableSeries series = evolve(state);
  std::vector<double> x;
  for (Eigen::Index i = 0; i < series.field_vev.rows(); ++i) {
    const Eigen::VectorXd env =
        squared_envelope(series.field_vev.row(i).transpose());
    x.push_back(centroid(env, 0, p.n_sites));
  }
  const double v = fitted_slope(series.times, x);
  const double expected = k / std::sqrt(1.0 + k * k);
  const double rel = std::abs(v - expected) / expected;
  return {rel < 0.1, "centroid speed " + fmt(v) + " vs k/sqrt(w^2+k^2) " +
                         fmt(expected) + ", relative error " + fmt(rel) +
                         " (<0.1)"};
}

Verdict unitarity_symmetry() {
  std::ostringstream detail;
  bool pass = true;

  // Per-step norm drift on a moving wavepacket.
  {
    const SimulationParams p = free_lattice(100, 10.0, 0.01);
    LatticeState state = gaussian_wavepacket(LatticeState::vacuum(p),
                                             {50.0, 0.3, 0.09, 1.0});
    const ObservableSeries s = evolve(state);
    const double worst = *std::max_element(s.norm_drift.begin(), s.norm_drift.end());
    pass = pass && worst < 1e-6;
    detail << "norm drift/step " << fmt(worst) << " (<1e-6)";
  }

  // Forward step followed by the reversed step.
  {
    SimulationParams p = free_lattice(8, 0.01, 0.01);
    p.coupling = 0.4;
    Eigen::VectorXd d(8);
    d << 1.0, -0.4, 0.2, 0.0, 0.7, -0.1, 0.3, 0.5;
    const LatticeState initial = displaced_lattice(LatticeState::vacuum(p), d);
    LatticeState state = initial;
    const TrotterEngine engine(p);
    engine.step(state);
    engine.reverse_step(state);
    const double xi = state.grid().spacing();
    double fidelity = 1.0;
    for (int n = 0; n < p.n_sites; ++n) {
      const complex overlap =
          xi * initial.sites().row(n).conjugate().dot(state.sites().row(n));
      fidelity = std::min(fidelity, std::norm(overlap));
    }
    pass = pass && fidelity >= 1.0 - 1e-6;
    detail << "; reverse fidelity " << fmt(fidelity) << " (>=1-1e-6)";
  }

  // Translation and reflection covariance.
  {
    SimulationParams p = free_lattice(12, 5.0, 0.01);
    p.coupling = 0.8;
    p.record_stride = 50;
    Eigen::VectorXd d(12);
    d << 0.9, 0.4, -0.2, 0.1, 0.3, 0.0, 0.6, 0.0, 0.3, 0.1, -0.2, 0.4;
    LatticeState base = displaced_lattice(LatticeState::vacuum(p), d);
    const int s = 5;
    Eigen::VectorXd shifted_d(12);
    for (int n = 0; n < 12; ++n) shifted_d[(n + s) % 12] = d[n];
    LatticeState shifted = displaced_lattice(LatticeState::vacuum(p), shifted_d);
    const ObservableSeries a = evolve(base);
    const ObservableSeries b = evolve(shifted);
    double translation = 0.0;
    for (int n = 0; n < 12; ++n) {
      translation = std::max(
          translation,
          (a.field_vev.col(n) - b.field_vev.col((n + s) % 12)).cwiseAbs().maxCoeff());
    }
    // Mirror-symmetric data about site 0 (n <-> -n mod 12).
    Eigen::VectorXd m(12);
    m << 0.9, 0.4, -0.2, 0.1, 0.3, 0.0, 0.6, 0.0, 0.3, 0.1, -0.2, 0.4;
    LatticeState mirror = displaced_lattice(LatticeState::vacuum(p), m);
    const ObservableSeries r = evolve(mirror);
    double reflection = 0.0;
    for (int n = 1; n < 12; ++n) {
      reflection = std::max(
          reflection, (r.field_vev.col(n) - r.field_vev.col(12 - n)).cwiseAbs().maxCoeff());
    }
    pass = pass && translation < 1e-8 && reflection < 1e-8;
    detail << "; translation " << fmt(translation) << ", reflection "
           << fmt(reflection) << " (<1e-8)";
  }

  // FFT hop against the dense circulant matrix.
  {
    const QuadratureGrid grid(200, 20.0);
    std::mt19937 rng(7);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int n = 2; n <= 8; ++n) {
      SiteBlock block(n, grid.size());
      for (Eigen::Index i = 0; i < block.size(); ++i) {
        block(i) = complex(normal(rng), normal(rng));
      }
      SiteBlock expected(n, grid.size());
      for (int j = 0; j < grid.size(); ++j) {
        expected.col(j) = dense_hop_matrix(n, 1.0, 0.01, grid.point(j)) * block.col(j);
      }
      HopPhases(grid, n, 1.0, 0.01).apply(block);
      worst = std::max(worst, (block - expected).cwiseAbs().maxCoeff());
    }
    pass = pass && worst < 1e-10;
    detail << "; FFT vs dense hop " << fmt(worst) << " (<1e-10)";
  }
  return {pass, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cvlattice acceptance suite"};
  std::string only;
  app.add_option("--only", only, "Run a single criterion by name");
  app.add_option("--out", out_root, "Directory for experiment outputs");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"single-qumode-fidelity", single_qumode},
      {"propagator", propagator},
      {"degenerate-cancellation", degenerate},
      {"few-site-oracle", few_site},
      {"energy-conservation", energy},
      {"scattering-structure", scattering},
      {"group-velocity", group_velocity},
      {"unitarity-symmetry", unitarity_symmetry},
  };

  int failures = 0;
  int ran = 0;
  for (const auto& [name, check] : criteria) {
    if (!only.empty() && only != name) continue;
    ++ran;
    Verdict v{false, ""};
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail
              << std::endl;
  }
  if (ran == 0) {
    std::cerr << "no criterion named '" << only << "'\n";
    return 2;
  }
  std::cout << (ran - failures) << "/" << ran << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
