// Copyright 2026 The qjump Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "qjump/spin_algebra.hpp"

namespace qjump {

/// Jump-count distribution on the grid n = 0..M-1 (per counted axis).
/// rank 1: total count on `counted_sites`; rank 2: joint counts on the two
/// sites counted_sites[0], counted_sites[1], stored row-major (n1 * M + n2).
struct CountDistribution {
  int rank = 1;
  int grid_size = 0;
  double t = 0.0;
  std::vector<int> counted_sites;
  std::vector<double> probs;
  double min_raw = 0.0;    ///< most negative value before clamping
  double max_imag = 0.0;   ///< largest imaginary residue of the inverse transform

  double p(int n) const;
  double p(int n1, int n2) const;
  double total() const;
  std::vector<double> marginal(int axis) const;
  double mean(int axis = 0) const;
  double variance(int axis = 0) const;
  /// E[n1 n2] - E[n1] E[n2].
  double covariance() const;
  /// sum (n1 - E n1)(n2 - E n2) P(n1, n2).
  double covariance_centered() const;
};

inline constexpr double kNegativeClampTolerance = 1e-8;
inline constexpr double kAliasingThreshold = 1e-6;

/// chi_k = 2 pi k / M.
std::vector<double> chi_grid(int M);

/// Smallest admissible 1D grid: next power of two >= max(64, 8 ceil(4 gamma t n)).
int required_grid_size(double gamma, double t, int n_counted_sites);

bool is_power_of_two(int M);

/// P(n) = (1/M) sum_k e^{-i n chi_k} T_k, then clamp tiny negatives and renormalize.
/// Throws AliasingError when any P(n) < -kAliasingThreshold.
CountDistribution invert_counting_1d(std::span<const Complex> traces, double t,
                                     std::vector<int> counted_sites);

/// traces(k1, k2) over an M x M grid.
CountDistribution invert_counting_2d(const ComplexMatrix& traces, double t,
                                     std::vector<int> counted_sites);

/// P(n1, n2) - P(n1) P(n2), row-major.
std::vector<double> connected_joint(const CountDistribution& joint);

struct QuadrantSums {
  double hi_lo = 0.0;  ///< n1 > E n1, n2 < E n2
  double lo_hi = 0.0;
  double hi_hi = 0.0;
  double lo_lo = 0.0;
};

/// Sums of the connected joint distribution in the four quadrants around the means.
QuadrantSums quadrant_sums(const CountDistribution& joint);

/// (1/2) sum |p - q|, shorter vector padded with zeros.
double total_variation(std::span<const double> p, std::span<const double> q);

/// CSV with columns (n, p) or (n1, n2, p).
void write_csv(const CountDistribution& dist, std::ostream& out);

}  // namespace qjump
