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

#ifndef CVLATTICE_ANALYSIS_HPP
#define CVLATTICE_ANALYSIS_HPP

// Scalar diagnostics extracted from recorded observables.

#include <vector>

#include <Eigen/Core>

namespace cvlattice {

/// Pearson correlation coefficient; NaN if either input is constant.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

/// Least-squares slope of y against x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

/// |analytic signal|^2 of a real periodic profile over sites: the squared
/// envelope with the carrier oscillation removed.
Eigen::VectorXd squared_envelope(const Eigen::VectorXd& field);

/// First moment of `weights` over sites [begin, end); NaN if they sum to 0.
double centroid(const Eigen::VectorXd& weights, int begin, int end);

/// Largest |field(t, n)| with periodic distance |n - origin| * spacing
/// strictly greater than t + band.
double light_cone_violation(const std::vector<double>& times,
                            const Eigen::MatrixXd& field, int origin,
                            double spacing, double band);

/// Time of the maximum of `values`, refined by a parabola through the
/// largest sample and its neighbours (uniform sampling assumed).
double peak_time(const std::vector<double>& times,
                 const std::vector<double>& values);

/// max_t |E(t) - E(0)| / |E(0)|.
double relative_drift(const std::vector<double>& values);

}  // namespace cvlattice

#endif  // CVLATTICE_ANALYSIS_HPP
