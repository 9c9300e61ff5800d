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

#include "cvlattice/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fft_plan.hpp"

namespace cvlattice {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("pearson: sizes");
  const std::size_t n = a.size();
  if (n < 2) return kNaN;
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return kNaN;
  return sab / std::sqrt(saa * sbb);
}

double fitted_slope(const std::vector<double>& x,
                    const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fitted_slope: sizes");
  const std::size_t n = x.size();
  if (n < 2) return kNaN;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx == 0.0 ? kNaN : sxy / sxx;
}

Eigen::VectorXd squared_envelope(const Eigen::VectorXd& field) {
  const int n = static_cast<int>(field.size());
  if (n == 0) return {};
  Eigen::VectorXcd spectrum = field.cast<std::complex<double>>();
  const detail::BatchedFft forward(n, 1, 1, n, FFTW_FORWARD);
  const detail::BatchedFft backward(n, 1, 1, n, FFTW_BACKWARD);
  forward.execute(spectrum.data());
  // Keep DC (and Nyquist for even n) once, double positive wavenumbers,
  // drop negative ones.
  for (int k = 1; k < n; ++k) {
    if (2 * k < n) {
      spectrum[k] *= 2.0;
    } else if (2 * k > n) {
      spectrum[k] = 0.0;
    }
  }
  backward.execute(spectrum.data());
  return spectrum.cwiseAbs2() / (static_cast<double>(n) * n);
}

double centroid(const Eigen::VectorXd& weights, int begin, int end) {
  begin = std::max(begin, 0);
  end = std::min<int>(end, static_cast<int>(weights.size()));
  double total = 0.0;
  double moment = 0.0;
  for (int n = begin; n < end; ++n) {
    total += weights[n];
    moment += weights[n] * n;
  }
  return total > 0.0 ? moment / total : kNaN;
}

double light_cone_violation(const std::vector<double>& times,
                            const Eigen::MatrixXd& field, int origin,
                            double spacing, double band) {
  const int n_sites = static_cast<int>(field.cols());
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (int n = 0; n < n_sites; ++n) {
      const int d = std::abs(n - origin);
      const double distance = std::min(d, n_sites - d) * spacing;
      if (distance > times[i] + band) {
        worst = std::max(worst, std::abs(field(i, n)));
      }
    }
  }
  return worst;
}

double peak_time(const std::vector<double>& times,
                 const std::vector<double>& values) {
  if (times.size() != values.size() || times.empty()) {
    throw std::invalid_argument("peak_time: bad input");
  }
  const std::size_t i = static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
  if (i == 0 || i + 1 == values.size()) return times[i];
  const double y0 = values[i - 1];
  const double y1 = values[i];
  const double y2 = values[i + 1];
  const double curvature = y0 - 2.0 * y1 + y2;
  if (curvature >= 0.0) return times[i];
  const double offset = 0.5 * (y0 - y2) / curvature;
  return times[i] + offset * (times[i + 1] - times[i - 1]) / 2.0;
}

double relative_drift(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double e0 = values.front();
  double worst = 0.0;
  for (const double e : values) worst = std::max(worst, std::abs(e - e0));
  return e0 == 0.0 ? worst : worst / std::abs(e0);
}

}  // namespace cvlattice
