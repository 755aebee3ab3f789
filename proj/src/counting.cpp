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

#include "qjump/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "qjump/errors.hpp"
#include "qjump/io.hpp"

namespace qjump {

namespace {

std::vector<Complex> twiddles(int M) {
  std::vector<Complex> w(static_cast<std::size_t>(M));
  for (int k = 0; k < M; ++k) w[k] = std::polar(1.0, -2.0 * std::numbers::pi * k / M);
  return w;
}

void finalize(CountDistribution& dist, std::vector<Complex> raw) {
  double min_raw = 0.0;
  double max_imag = 0.0;
  dist.probs.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    min_raw = std::min(min_raw, raw[i].real());
    max_imag = std::max(max_imag, std::abs(raw[i].imag()));
    dist.probs[i] = raw[i].real();
  }
  dist.min_raw = min_raw;
  dist.max_imag = max_imag;
  if (min_raw < -kAliasingThreshold) {
    throw AliasingError("inverse transform produced P = " + std::to_string(min_raw) +
                        " (grid M=" + std::to_string(dist.grid_size) + " too small)");
  }
  double sum = 0.0;
  for (double& v : dist.probs) {
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (!(sum > 0.0)) throw AliasingError("inverse transform has no positive mass");
  for (double& v : dist.probs) v /= sum;
}

}  // namespace

double CountDistribution::p(int n) const {
  if (rank != 1) throw InvalidArgument("p(n) on a joint distribution");
  if (n < 0 || n >= grid_size) return 0.0;
  return probs[static_cast<std::size_t>(n)];
}

double CountDistribution::p(int n1, int n2) const {
  if (rank != 2) throw InvalidArgument("p(n1, n2) on a one-axis distribution");
  if (n1 < 0 || n2 < 0 || n1 >= grid_size || n2 >= grid_size) return 0.0;
  return probs[static_cast<std::size_t>(n1) * grid_size + n2];
}

double CountDistribution::total() const {
  double s = 0.0;
  for (double v : probs) s += v;
  return s;
}

std::vector<double> CountDistribution::marginal(int axis) const {
  if (rank == 1) {
    if (axis != 0) throw InvalidArgument("marginal: axis out of range");
    return probs;
  }
  if (axis != 0 && axis != 1) throw InvalidArgument("marginal: axis out of range");
  std::vector<double> m(static_cast<std::size_t>(grid_size), 0.0);
  for (int a = 0; a < grid_size; ++a) {
    for (int b = 0; b < grid_size; ++b) m[axis == 0 ? a : b] += p(a, b);
  }
  return m;
}

double CountDistribution::mean(int axis) const {
  const auto m = marginal(axis);
  double s = 0.0;
  for (std::size_t n = 0; n < m.size(); ++n) s += static_cast<double>(n) * m[n];
  return s;
}

double CountDistribution::variance(int axis) const {
  const auto m = marginal(axis);
  const double mu = mean(axis);
  double s = 0.0;
  for (std::size_t n = 0; n < m.size(); ++n) s += (n - mu) * (n - mu) * m[n];
  return s;
}

double CountDistribution::covariance() const {
  if (rank != 2) throw InvalidArgument("covariance needs a joint distribution");
  double e12 = 0.0;
  for (int a = 0; a < grid_size; ++a) {
    for (int b = 0; b < grid_size; ++b) e12 += static_cast<double>(a) * b * p(a, b);
  }
  return e12 - mean(0) * mean(1);
}

double CountDistribution::covariance_centered() const {
  if (rank != 2) throw InvalidArgument("covariance needs a joint distribution");
  const double mu1 = mean(0);
  const double mu2 = mean(1);
  double s = 0.0;
  for (int a = 0; a < grid_size; ++a) {
    for (int b = 0; b < grid_size; ++b) s += (a - mu1) * (b - mu2) * p(a, b);
  }
  return s;
}

std::vector<double> chi_grid(int M) {
  std::vector<double> chi(static_cast<std::size_t>(M));
  for (int k = 0; k < M; ++k) chi[k] = 2.0 * std::numbers::pi * k / M;
  return chi;
}

bool is_power_of_two(int M) { return M > 0 && (M & (M - 1)) == 0; }

int required_grid_size(double gamma, double t, int n_counted_sites) {
  const double bound = 8.0 * std::ceil(4.0 * gamma * t * n_counted_sites);
  int M = 64;
  while (M < bound) M *= 2;
  return M;
}

CountDistribution invert_counting_1d(std::span<const Complex> traces, double t,
                                     std::vector<int> counted_sites) {
  const int M = static_cast<int>(traces.size());
  if (!is_power_of_two(M)) throw InvalidArgument("grid size must be a power of two");
  const auto w = twiddles(M);
  std::vector<Complex> raw(static_cast<std::size_t>(M));
  for (int n = 0; n < M; ++n) {
    Complex s(0.0, 0.0);
    for (int k = 0; k < M; ++k) s += w[static_cast<std::size_t>((1LL * n * k) % M)] * traces[k];
    raw[n] = s / static_cast<double>(M);
  }
  CountDistribution dist;
  dist.rank = 1;
  dist.grid_size = M;
  dist.t = t;
  dist.counted_sites = std::move(counted_sites);
  finalize(dist, std::move(raw));
  return dist;
}

CountDistribution invert_counting_2d(const ComplexMatrix& traces, double t,
                                     std::vector<int> counted_sites) {
  const int M = static_cast<int>(traces.rows());
  if (traces.cols() != M || !is_power_of_two(M)) {
    throw InvalidArgument("2D grid must be square with power-of-two size");
  }
  if (counted_sites.size() != 2) throw InvalidArgument("joint counting needs two sites");
  const auto w = twiddles(M);
  // transform along k2, then along k1
  ComplexMatrix partial(M, M);
  for (int k1 = 0; k1 < M; ++k1) {
    for (int n2 = 0; n2 < M; ++n2) {
      Complex s(0.0, 0.0);
      for (int k2 = 0; k2 < M; ++k2) s += w[static_cast<std::size_t>((1LL * n2 * k2) % M)] * traces(k1, k2);
      partial(k1, n2) = s;
    }
  }
  std::vector<Complex> raw(static_cast<std::size_t>(M) * M);
  const double norm = 1.0 / (static_cast<double>(M) * M);
  for (int n1 = 0; n1 < M; ++n1) {
    for (int n2 = 0; n2 < M; ++n2) {
      Complex s(0.0, 0.0);
      for (int k1 = 0; k1 < M; ++k1) s += w[static_cast<std::size_t>((1LL * n1 * k1) % M)] * partial(k1, n2);
      raw[static_cast<std::size_t>(n1) * M + n2] = s * norm;
    }
  }
  CountDistribution dist;
  dist.rank = 2;
  dist.grid_size = M;
  dist.t = t;
  dist.counted_sites = std::move(counted_sites);
  finalize(dist, std::move(raw));
  return dist;
}

std::vector<double> connected_joint(const CountDistribution& joint) {
  if (joint.rank != 2) throw InvalidArgument("connected_joint needs a joint distribution");
  const auto m1 = joint.marginal(0);
  const auto m2 = joint.marginal(1);
  const int M = joint.grid_size;
  std::vector<double> c(static_cast<std::size_t>(M) * M);
  for (int a = 0; a < M; ++a) {
    for (int b = 0; b < M; ++b) c[static_cast<std::size_t>(a) * M + b] = joint.p(a, b) - m1[a] * m2[b];
  }
  return c;
}

QuadrantSums quadrant_sums(const CountDistribution& joint) {
  const auto c = connected_joint(joint);
  const double mu1 = joint.mean(0);
  const double mu2 = joint.mean(1);
  const int M = joint.grid_size;
  QuadrantSums q;
  for (int a = 0; a < M; ++a) {
    for (int b = 0; b < M; ++b) {
      const double v = c[static_cast<std::size_t>(a) * M + b];
      const bool hi1 = a > mu1;
      const bool hi2 = b > mu2;
      if (hi1 && !hi2) q.hi_lo += v;
      else if (!hi1 && hi2) q.lo_hi += v;
      else if (hi1 && hi2) q.hi_hi += v;
      else q.lo_lo += v;
    }
  }
  return q;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  const std::size_t n = std::max(p.size(), q.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    s += std::abs(a - b);
  }
  return 0.5 * s;
}

void write_csv(const CountDistribution& dist, std::ostream& out) {
  if (dist.rank == 1) {
    out << "n,p\n";
    for (int n = 0; n < dist.grid_size; ++n) out << n << ',' << format_double(dist.p(n)) << '\n';
    return;
  }
  out << "n1,n2,p\n";
  for (int a = 0; a < dist.grid_size; ++a) {
    for (int b = 0; b < dist.grid_size; ++b) {
      out << a << ',' << b << ',' << format_double(dist.p(a, b)) << '\n';
    }
  }
}

}  // namespace qjump
