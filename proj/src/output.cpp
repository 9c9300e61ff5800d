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

#include "cvlattice/output.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace cvlattice {

static_assert(std::endian::native == std::endian::little,
              "psi.raw is written in native byte order");

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  return in;
}

double parse_double(const std::string& token, const std::string& path) {
  // strtod accepts inf/nan, which %.17g can emit.
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') {
    throw std::runtime_error(path + ": bad number '" + token + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_site_series(const std::string& path,
                       const std::vector<double>& times,
                       const Eigen::MatrixXd& values) {
  if (static_cast<Eigen::Index>(times.size()) != values.rows()) {
    throw std::invalid_argument("write_site_series: shape mismatch");
  }
  std::ofstream out = open_out(path);
  out << "t,site,value\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    const std::string t = format_number(times[i]);
    for (Eigen::Index n = 0; n < values.cols(); ++n) {
      out << t << ',' << n << ',' << format_number(values(i, n)) << '\n';
    }
  }
}

SiteSeries read_site_series(const std::string& path) {
  std::vector<std::string> header;
  const auto rows = read_table(path, &header);
  if (header != std::vector<std::string>{"t", "site", "value"}) {
    throw std::runtime_error(path + ": expected header t,site,value");
  }
  SiteSeries series;
  int n_sites = 0;
  for (const auto& r : rows) {
    n_sites = std::max(n_sites, static_cast<int>(r[1]) + 1);
    if (series.times.empty() || series.times.back() != r[0]) {
      series.times.push_back(r[0]);
    }
  }
  if (rows.size() != series.times.size() * static_cast<std::size_t>(n_sites)) {
    throw std::runtime_error(path + ": ragged site series");
  }
  series.values.resize(series.times.size(), n_sites);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t i = k / n_sites;
    const int n = static_cast<int>(rows[k][1]);
    if (rows[k][0] != series.times[i] || n != static_cast<int>(k % n_sites)) {
      throw std::runtime_error(path + ": rows out of order");
    }
    series.values(i, n) = rows[k][2];
  }
  return series;
}

void write_norms(const std::string& path, const std::vector<double>& times,
                 const std::vector<double>& drift) {
  if (times.size() != drift.size()) {
    throw std::invalid_argument("write_norms: shape mismatch");
  }
  std::ofstream out = open_out(path);
  out << "t,max_drift\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    out << format_number(times[i]) << ',' << format_number(drift[i]) << '\n';
  }
}

std::vector<std::pair<double, double>> read_norms(const std::string& path) {
  std::vector<std::string> header;
  const auto rows = read_table(path, &header);
  if (header != std::vector<std::string>{"t", "max_drift"}) {
    throw std::runtime_error(path + ": expected header t,max_drift");
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.emplace_back(r[0], r[1]);
  return out;
}

void write_metrics(const std::string& path, const Metrics& metrics) {
  std::ofstream out = open_out(path);
  out << "name,value\n";
  for (const auto& [name, value] : metrics) {
    if (name.find_first_of(",\n") != std::string::npos) {
      throw std::invalid_argument("metric name '" + name +
                                  "' contains a separator");
    }
    out << name << ',' << format_number(value) << '\n';
  }
}

Metrics read_metrics(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "name,value") {
    throw std::runtime_error(path + ": expected header name,value");
  }
  Metrics out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error(path + ": malformed row '" + line + "'");
    }
    out.emplace_back(line.substr(0, comma),
                     parse_double(line.substr(comma + 1), path));
  }
  return out;
}

void write_table(const std::string& path,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
  std::ofstream out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw std::invalid_argument("write_table: row width mismatch");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_number(row[i]);
    }
    out << '\n';
  }
}

std::vector<std::vector<double>> read_table(const std::string& path,
                                            std::vector<std::string>* header) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": empty file");
  }
  const std::vector<std::string> names = split(line);
  if (header) *header = names;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != names.size()) {
      throw std::runtime_error(path + ": row width does not match header");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c, path));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
}

// ---------------------------------------------------------------------------
// psi.raw

PsiWriter::PsiWriter(const std::string& path, int n_sites, int m_points)
    : out_(open_out(path)), n_sites_(n_sites), m_points_(m_points) {
  write_header();
}

PsiWriter::~PsiWriter() {
  try {
    close();
  } catch (...) {
  }
}

void PsiWriter::write_header() {
  char header[kHeaderBytes];
  std::memset(header, ' ', sizeof(header));
  const int len =
      std::snprintf(header, sizeof(header), "cvlattice-psi %d %d %lld",
                    n_sites_, m_points_, static_cast<long long>(snapshots_));
  header[len] = ' ';  // overwrite snprintf's terminator
  header[kHeaderBytes - 1] = '\n';
  out_.seekp(0);
  out_.write(header, sizeof(header));
}

void PsiWriter::write(const SiteBlock& sites) {
  if (!out_.is_open()) throw std::logic_error("PsiWriter: already closed");
  if (sites.rows() != n_sites_ || sites.cols() != m_points_) {
    throw std::invalid_argument("PsiWriter: block shape mismatch");
  }
  // The block is column-major; the file is site-major.
  const Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      rows = sites;
  out_.write(reinterpret_cast<const char*>(rows.data()),
             static_cast<std::streamsize>(rows.size() * sizeof(complex)));
  ++snapshots_;
}

void PsiWriter::close() {
  if (!out_.is_open()) return;
  write_header();
  out_.close();
  if (out_.fail()) throw std::runtime_error("PsiWriter: write failed");
}

PsiFile read_psi(const std::string& path) {
  std::ifstream in = open_in(path);
  char header[PsiWriter::kHeaderBytes + 1] = {};
  in.read(header, PsiWriter::kHeaderBytes);
  if (in.gcount() != static_cast<std::streamsize>(PsiWriter::kHeaderBytes)) {
    throw std::runtime_error(path + ": truncated header");
  }
  PsiFile file;
  long long count = 0;
  if (std::sscanf(header, "cvlattice-psi %d %d %lld", &file.n_sites,
                  &file.m_points, &count) != 3) {
    throw std::runtime_error(path + ": bad header");
  }
  using RowBlock =
      Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  for (long long s = 0; s < count; ++s) {
    RowBlock rows(file.n_sites, file.m_points);
    in.read(reinterpret_cast<char*>(rows.data()),
            static_cast<std::streamsize>(rows.size() * sizeof(complex)));
    if (!in) throw std::runtime_error(path + ": truncated data");
    file.snapshots.emplace_back(rows);
  }
  return file;
}

}  // namespace cvlattice
