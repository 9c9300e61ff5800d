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

#include "cvlattice/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "cvlattice/analysis.hpp"
#include "cvlattice/oracle.hpp"

namespace cvlattice {

namespace {

namespace fs = std::filesystem;

std::string in_dir(const ExperimentConfig& c, const char* name) {
  return (fs::path(c.output_dir) / name).string();
}

void prepare_output(const ExperimentConfig& c) {
  validate_config(c);
  fs::create_directories(c.output_dir);
  write_text(in_dir(c, "config-echo.toml"), to_toml(c));
}

double max_of(const std::vector<double>& v) {
  double worst = 0.0;
  for (const double x : v) worst = std::max(worst, x);
  return worst;
}

std::string label(const char* stem, double t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s@%g", stem, t);
  return buf;
}

QumodeWavefunction initial_qumode(const QuadratureGrid& grid, double omega,
                                  double displacement) {
  return displacement == 0.0
             ? ground_state(grid, omega)
             : displaced_ground_state(grid, omega, displacement);
}

// Runs evolve() with optional psi.raw output and writes the three series.
ObservableSeries evolve_and_record(const ExperimentConfig& c,
                                   LatticeState& state,
                                   const SnapshotObserver& extra = {}) {
  std::unique_ptr<PsiWriter> psi;
  if (c.write_psi) {
    psi = std::make_unique<PsiWriter>(in_dir(c, "psi.raw"), state.n_sites(),
                                      state.grid().size());
  }
  const SnapshotObserver observer = [&](const LatticeState& s) {
    if (psi) psi->write(s.sites());
    if (extra) extra(s);
  };
  ObservableSeries series = evolve(state, observer);
  if (psi) psi->close();
  write_site_series(in_dir(c, "field.csv"), series.times, series.field_vev);
  write_site_series(in_dir(c, "energy.csv"), series.times,
                    series.energy_density);
  write_norms(in_dir(c, "norms.csv"), series.drift_times, series.norm_drift);
  return series;
}

void append_series_metrics(Metrics& m, const ObservableSeries& series) {
  m.emplace_back("steps", static_cast<double>(series.norm_drift.size()));
  m.emplace_back("max_norm_drift", max_of(series.norm_drift));
  m.emplace_back("energy_initial", series.total_energy.front());
  m.emplace_back("energy_drift", relative_drift(series.total_energy));
}

double sup_distance(const Eigen::Ref<const Eigen::VectorXcd>& a,
                    const Eigen::Ref<const Eigen::VectorXcd>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

// ---------------------------------------------------------------------------

Metrics run_single_qumode(const ExperimentConfig& c) {
  prepare_output(c);
  const SimulationParams& p = c.params;
  const QuadratureGrid grid = p.make_grid();
  const double omega = p.mass;
  const Potential potential =
      cubic_quartic_test_potential(c.single_qumode.epsilon);
  const RotationGate rotation(fock_table(grid, omega, p.grid.l_trunc), p.dt);
  const PotentialPhase phase = build_potential_phase(grid, potential, p.dt);
  const ExactSingleQumode exact(grid, omega, potential);
  const QumodeWavefunction psi0 =
      initial_qumode(grid, omega, c.single_qumode.displacement);

  std::map<long, double> wanted;
  for (const double t : c.single_qumode.times) {
    wanted[std::lround(t / p.dt)] = t;
  }
  const long steps = p.steps();
  const Eigen::VectorXd q = grid.points();
  Eigen::VectorXd v(grid.size());
  for (int j = 0; j < grid.size(); ++j) v[j] = potential(q[j]);

  std::vector<double> times;
  std::vector<double> mean_q;
  std::vector<double> energy;
  std::vector<double> drift_times;
  std::vector<double> drift;
  std::vector<std::vector<double>> density_rows;
  std::vector<std::vector<double>> discrepancy_rows;
  Metrics m;

  auto record = [&](const QumodeWavefunction& psi, double t) {
    times.push_back(t);
    mean_q.push_back(psi.mean_q());
    const Eigen::VectorXd rho = psi.density();
    energy.push_back(0.5 * psi.mean_p2() + 0.5 * omega * omega * psi.mean_q2() +
                     grid.spacing() * rho.dot(v));
  };
  auto compare = [&](const QumodeWavefunction& psi, double t) {
    const Eigen::VectorXd rho = psi.density();
    const Eigen::VectorXd ref = exact.evolve(psi0, t).density();
    for (int j = 0; j < grid.size(); ++j) {
      density_rows.push_back({t, q[j], rho[j], ref[j]});
    }
    const double abs_err = density_l2_distance(rho, ref, grid.spacing());
    const double ref_norm = std::sqrt(grid.spacing() * ref.squaredNorm());
    discrepancy_rows.push_back({t, abs_err, abs_err / ref_norm});
    m.emplace_back(label("l2_abs", t), abs_err);
    m.emplace_back(label("l2_rel", t), abs_err / ref_norm);
  };

  std::unique_ptr<PsiWriter> psi_out;
  if (c.write_psi) {
    psi_out = std::make_unique<PsiWriter>(in_dir(c, "psi.raw"), 1,
                                          grid.size());
  }
  QumodeWavefunction psi = psi0;
  auto snapshot = [&](long s) {
    const double t = s * p.dt;
    if (s % p.record_stride == 0) {
      record(psi, t);
      if (psi_out) psi_out->write(psi.amplitudes().transpose());
    }
    if (wanted.count(s)) compare(psi, wanted.at(s));
  };

  snapshot(0);
  for (long s = 1; s <= steps; ++s) {
    DiagonalStepResult r = apply_diagonal_step(psi, rotation, phase);
    if (!std::isfinite(r.drift)) {
      throw NumericalFailure(
          "single-qumode: non-finite wavefunction at step " +
              std::to_string(s),
          s);
    }
    psi = std::move(r.psi);
    drift_times.push_back(s * p.dt);
    drift.push_back(r.drift);
    snapshot(s);
  }
  if (psi_out) psi_out->close();

  const Eigen::MatrixXd field_values =
      Eigen::Map<const Eigen::VectorXd>(mean_q.data(), mean_q.size());
  const Eigen::MatrixXd energy_values =
      Eigen::Map<const Eigen::VectorXd>(energy.data(), energy.size());
  write_site_series(in_dir(c, "field.csv"), times, field_values);
  write_site_series(in_dir(c, "energy.csv"), times, energy_values);
  write_norms(in_dir(c, "norms.csv"), drift_times, drift);
  write_table(in_dir(c, "density.csv"), {"t", "q", "trotter", "exact"},
              density_rows);
  write_table(in_dir(c, "discrepancy.csv"), {"t", "l2_abs", "l2_rel"},
              discrepancy_rows);

  m.emplace_back("steps", static_cast<double>(steps));
  m.emplace_back("max_norm_drift", max_of(drift));
  m.emplace_back("energy_initial", energy.front());
  m.emplace_back("energy_drift", relative_drift(energy));
  write_metrics(in_dir(c, "metrics.csv"), m);
  return m;
}

Metrics run_propagator(const ExperimentConfig& c) {
  prepare_output(c);
  const SimulationParams& p = c.params;
  const int site =
      c.propagator.site < 0 ? p.n_sites / 2 : c.propagator.site;
  LatticeState state = delta_impulse(LatticeState::vacuum(p), site,
                                     c.propagator.amplitude);
  const ObservableSeries series = evolve_and_record(c, state);

  std::vector<std::vector<double>> slice_rows;
  std::vector<double> measured;
  std::vector<double> reference;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    const double field = series.field_vev(i, site);
    const double dr = retarded_propagator(p.mass, 0.0, t);
    slice_rows.push_back({t, field, dr});
    if (t >= c.propagator.exclude) {
      measured.push_back(field);
      reference.push_back(dr);
    }
  }
  write_table(in_dir(c, "slice.csv"), {"t", "field", "propagator"},
              slice_rows);

  const double outside = light_cone_violation(
      series.times, series.field_vev, site, p.spacing, c.propagator.band);
  const double amplitude = std::abs(c.propagator.amplitude);
  Metrics m;
  m.emplace_back("impulse_site", site);
  m.emplace_back("causality_max_abs", outside);
  m.emplace_back("causality_ratio",
                 amplitude > 0.0 ? outside / amplitude : outside);
  m.emplace_back("slice_pearson", pearson(measured, reference));
  m.emplace_back("max_abs_field", series.field_vev.cwiseAbs().maxCoeff());
  append_series_metrics(m, series);
  write_metrics(in_dir(c, "metrics.csv"), m);
  return m;
}

Metrics run_scattering(const ExperimentConfig& c) {
  prepare_output(c);
  const SimulationParams& p = c.params;
  WavepacketSpec left = c.wavepackets[0];
  WavepacketSpec right = c.wavepackets[1];
  if (right.center < left.center) std::swap(left, right);
  LatticeState state =
      two_wavepackets(LatticeState::vacuum(p), left, right);
  const ObservableSeries series = evolve_and_record(c, state);

  const int n_sites = p.n_sites;
  const int split = static_cast<int>(
      std::lround(0.5 * (left.center + right.center) / p.spacing));
  const int hw = c.scattering.center_halfwidth;
  std::vector<double> left_track;
  std::vector<double> right_track;
  std::vector<double> center_energy;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const Eigen::VectorXd env =
        squared_envelope(series.field_vev.row(i).transpose());
    const double xl = p.spacing * centroid(env, 0, split);
    const double xr = p.spacing * centroid(env, split, n_sites);
    double e = 0.0;
    for (int d = -hw; d <= hw; ++d) {
      e += series.energy_density(i, ((split + d) % n_sites + n_sites) % n_sites);
    }
    e /= 2 * hw + 1;
    left_track.push_back(xl);
    right_track.push_back(xr);
    center_energy.push_back(e);
    rows.push_back({series.times[i], xl, xr, e});
  }
  write_table(in_dir(c, "tracks.csv"), {"t", "left", "right", "center_energy"},
              rows);

  const double window = c.scattering.speed_window * p.total_time;
  std::vector<double> t_fit;
  std::vector<double> l_fit;
  std::vector<double> r_fit;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    if (series.times[i] > window + 1e-9) break;
    t_fit.push_back(series.times[i]);
    l_fit.push_back(left_track[i]);
    r_fit.push_back(right_track[i]);
  }
  const double v_left = fitted_slope(t_fit, l_fit);
  const double v_right = fitted_slope(t_fit, r_fit);
  const std::size_t peak = static_cast<std::size_t>(
      std::max_element(center_energy.begin(), center_energy.end()) -
      center_energy.begin());

  Metrics m;
  m.emplace_back("centroid_speed", 0.5 * (v_left - v_right));
  m.emplace_back("left_speed", v_left);
  m.emplace_back("right_speed", v_right);
  m.emplace_back("collision_time", peak_time(series.times, center_energy));
  m.emplace_back("collision_peak_energy", center_energy[peak]);
  const double k = 0.5 * (std::abs(left.momentum) + std::abs(right.momentum));
  m.emplace_back("free_group_velocity", k / std::hypot(p.mass, k));
  append_series_metrics(m, series);
  write_metrics(in_dir(c, "metrics.csv"), m);
  return m;
}

Metrics run_degenerate_check(const ExperimentConfig& c) {
  prepare_output(c);
  const SimulationParams& p = c.params;
  const QuadratureGrid grid = p.make_grid();
  const QumodeWavefunction common =
      initial_qumode(grid, p.mass, c.degenerate.displacement);
  LatticeState state(p, common.amplitudes().transpose().replicate(
                            p.n_sites, 1));

  // Reference: one qumode under the bare interaction, no hopping and no
  // q^2/a^2 term.
  const RotationGate rotation(fock_table(grid, p.mass, p.grid.l_trunc), p.dt);
  const PotentialPhase phase =
      build_potential_phase(grid, p.interaction(), p.dt);
  QumodeWavefunction single = common;
  long single_steps = 0;

  double worst_intersite = 0.0;
  double worst_single = 0.0;
  std::vector<std::vector<double>> rows;
  const SnapshotObserver compare = [&](const LatticeState& s) {
    const long target = std::lround(s.time() / p.dt);
    for (; single_steps < target; ++single_steps) {
      single = apply_diagonal_step(single, rotation, phase).psi;
    }
    double intersite = 0.0;
    double to_single = 0.0;
    for (int n = 0; n < s.n_sites(); ++n) {
      const Eigen::VectorXcd row = s.sites().row(n).transpose();
      intersite = std::max(
          intersite, sup_distance(row, s.sites().row(0).transpose()));
      to_single = std::max(to_single, sup_distance(row, single.amplitudes()));
    }
    worst_intersite = std::max(worst_intersite, intersite);
    worst_single = std::max(worst_single, to_single);
    rows.push_back({s.time(), intersite, to_single});
  };
  const ObservableSeries series = evolve_and_record(c, state, compare);
  write_table(in_dir(c, "deviation.csv"), {"t", "intersite", "single"}, rows);

  Metrics m;
  m.emplace_back("max_intersite_deviation", worst_intersite);
  m.emplace_back("max_single_deviation", worst_single);
  append_series_metrics(m, series);
  write_metrics(in_dir(c, "metrics.csv"), m);
  return m;
}

Metrics run_oracle_compare(const ExperimentConfig& c) {
  prepare_output(c);
  const SimulationParams& p = c.params;
  const int cutoff = c.oracle.fock_cutoff;
  const double d = c.oracle.displacement;
  const QuadratureGrid grid = p.make_grid();

  LatticeState state = LatticeState::vacuum(p);
  state.set_site(c.oracle.site, initial_qumode(grid, p.mass, d));

  // A q-displaced ground state is the coherent state alpha = d sqrt(omega/2).
  const double alpha = d * std::sqrt(0.5 * p.mass);
  std::vector<Eigen::VectorXcd> site_states(
      p.n_sites, coherent_state_coefficients(0.0, cutoff));
  site_states[c.oracle.site] = coherent_state_coefficients(alpha, cutoff);
  const ExactFewSite exact(p, cutoff);
  const Eigen::VectorXcd psi0 = exact.product_state(site_states);
  const FockBasisTable table = fock_table(grid, p.mass, cutoff);

  std::vector<std::vector<double>> rows;
  std::vector<double> last_distance(p.n_sites);
  std::vector<double> last_fidelity(p.n_sites);
  std::vector<Eigen::VectorXd> last_density(p.n_sites);
  const SnapshotObserver compare = [&](const LatticeState& s) {
    const Eigen::VectorXcd psi = exact.evolve(psi0, s.time());
    for (int n = 0; n < s.n_sites(); ++n) {
      const Eigen::MatrixXcd rho = exact.reduced_density(psi, n);
      const Eigen::VectorXd ref = density_on_grid(rho, table);
      const QumodeWavefunction site = s.site(n);
      const Eigen::VectorXcd coeffs = fock_decompose(site, table);
      last_distance[n] =
          density_l2_distance(site.density(), ref, grid.spacing());
      last_fidelity[n] = (coeffs.adjoint() * rho * coeffs)(0, 0).real();
      last_density[n] = ref;
      rows.push_back({s.time(), static_cast<double>(n), last_distance[n],
                      last_fidelity[n]});
    }
  };
  const ObservableSeries series = evolve_and_record(c, state, compare);
  write_table(in_dir(c, "oracle.csv"), {"t", "site", "distance", "fidelity"},
              rows);

  Metrics m;
  for (int n = 0; n < p.n_sites; ++n) {
    m.emplace_back("distance_site" + std::to_string(n), last_distance[n]);
  }
  for (int n = 0; n < p.n_sites; ++n) {
    m.emplace_back("fidelity_site" + std::to_string(n), last_fidelity[n]);
  }
  m.emplace_back("max_distance", max_of(last_distance));
  m.emplace_back("min_fidelity",
                 *std::min_element(last_fidelity.begin(), last_fidelity.end()));

  // Truncation check: redo the exact run with twice the cutoff when it fits.
  long doubled = 1;
  for (int n = 0; n < p.n_sites; ++n) doubled *= 2 * cutoff + 1;
  if (doubled <= ExactFewSite::kMaxDimension) {
    std::vector<Eigen::VectorXcd> wide(
        p.n_sites, coherent_state_coefficients(0.0, 2 * cutoff));
    wide[c.oracle.site] = coherent_state_coefficients(alpha, 2 * cutoff);
    const FewSiteResult fine = exact_few_site(p, 2 * cutoff, wide,
                                              series.times.back());
    double change = 0.0;
    for (int n = 0; n < p.n_sites; ++n) {
      change = std::max(change, density_l2_distance(fine.densities[n],
                                                    last_density[n],
                                                    grid.spacing()));
    }
    m.emplace_back("cutoff_doubling_change", change);
  }
  append_series_metrics(m, series);
  write_metrics(in_dir(c, "metrics.csv"), m);
  return m;
}

Metrics run_experiment(const ExperimentConfig& c) {
  switch (c.experiment) {
    case Experiment::kSingleQumode: return run_single_qumode(c);
    case Experiment::kPropagator: return run_propagator(c);
    case Experiment::kScattering: return run_scattering(c);
    case Experiment::kDegenerateCheck: return run_degenerate_check(c);
    case Experiment::kOracleCompare: return run_oracle_compare(c);
  }
  throw ConfigError("unknown experiment");
}

double metric(const Metrics& metrics, const std::string& name) {
  for (const auto& [key, value] : metrics) {
    if (key == name) return value;
  }
  throw std::out_of_range("no metric named '" + name + "'");
}

}  // namespace cvlattice
