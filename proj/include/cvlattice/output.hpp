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

#ifndef CVLATTICE_OUTPUT_HPP
#define CVLATTICE_OUTPUT_HPP

// Run-directory file formats. Every number is printed with 17 significant
// digits so that reading a file back reproduces the doubles exactly.
//
//   field.csv, energy.csv   t,site,value        one row per (snapshot, site)
//   norms.csv               t,max_drift         one row per Trotter step
//   metrics.csv             name,value
//   psi.raw                 64-byte ASCII header "cvlattice-psi N M S", space
//                           padded, then S snapshots of N x M little-endian
//                           (re, im) float64 pairs, site-major.

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cvlattice/lattice.hpp"

namespace cvlattice {

using Metrics = std::vector<std::pair<std::string, double>>;

/// Snapshot-major table of per-site values.
struct SiteSeries {
  std::vector<double> times;
  Eigen::MatrixXd values;  // times.size() x n_sites
};

std::string format_number(double x);

void write_site_series(const std::string& path,
                       const std::vector<double>& times,
                       const Eigen::MatrixXd& values);
SiteSeries read_site_series(const std::string& path);

void write_norms(const std::string& path, const std::vector<double>& times,
                 const std::vector<double>& drift);
std::vector<std::pair<double, double>> read_norms(const std::string& path);

void write_metrics(const std::string& path, const Metrics& metrics);
Metrics read_metrics(const std::string& path);

/// Generic CSV with a header row and numeric columns.
void write_table(const std::string& path,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);
std::vector<std::vector<double>> read_table(const std::string& path,
                                            std::vector<std::string>* header);

void write_text(const std::string& path, const std::string& text);

/// Streams lattice snapshots to psi.raw; the header's snapshot count is
/// patched on close().
class PsiWriter {
 public:
  static constexpr std::size_t kHeaderBytes = 64;

  PsiWriter(const std::string& path, int n_sites, int m_points);
  ~PsiWriter();
  PsiWriter(const PsiWriter&) = delete;
  PsiWriter& operator=(const PsiWriter&) = delete;

  void write(const SiteBlock& sites);
  void close();
  std::int64_t snapshots() const { return snapshots_; }

 private:
  void write_header();

  std::ofstream out_;
  int n_sites_;
  int m_points_;
  std::int64_t snapshots_ = 0;
};

struct PsiFile {
  int n_sites = 0;
  int m_points = 0;
  std::vector<SiteBlock> snapshots;
};

PsiFile read_psi(const std::string& path);

}  // namespace cvlattice

#endif  // CVLATTICE_OUTPUT_HPP
