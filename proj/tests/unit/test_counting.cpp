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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qjump/counting.hpp"
#include "qjump/errors.hpp"

using namespace qjump;

namespace {

double poisson(double lam, int n) { return std::exp(-lam + n * std::log(lam) - std::lgamma(n + 1.0)); }

}  // namespace

TEST_CASE("grid") {
  const auto g = chi_grid(8);
  CHECK(g.size() == 8);
  CHECK(g[2] == doctest::Approx(M_PI / 2));
  CHECK(is_power_of_two(64));
  CHECK_FALSE(is_power_of_two(48));
  CHECK(required_grid_size(0.5, 10.0, 1) == 256);
  CHECK(required_grid_size(0.01, 1.0, 1) == 64);
}

TEST_CASE("poisson traces invert to poisson") {
  const double lam = 3.7;
  const int M = 64;
  std::vector<Complex> tr;
  for (double chi : chi_grid(M)) tr.push_back(std::exp(lam * (std::polar(1.0, chi) - 1.0)));
  const auto d = invert_counting_1d(tr, 1.0, {0});
  for (int n = 0; n < 20; ++n) CHECK(d.p(n) == doctest::Approx(poisson(lam, n)).epsilon(1e-12));
  CHECK(d.mean() == doctest::Approx(lam).epsilon(1e-12));
  CHECK(d.variance() == doctest::Approx(lam).epsilon(1e-12));
  CHECK(d.total() == doctest::Approx(1.0));
  CHECK(d.max_imag < 1e-12);
}

TEST_CASE("grid that is not a power of two is rejected") {
  std::vector<Complex> tr(48, Complex(1.0, 0.0));
  CHECK_THROWS_AS(invert_counting_1d(tr, 1.0, {0}), InvalidArgument);
}

TEST_CASE("negative inverse is reported as aliasing") {
  std::vector<Complex> tr(64, Complex(0.0, 0.0));
  tr[0] = 1.0;
  tr[1] = tr[63] = -20.0;
  CHECK_THROWS_AS(invert_counting_1d(tr, 1.0, {0}), AliasingError);
}

TEST_CASE("joint of independent poissons") {
  const double a = 1.2, b = 2.5;
  const int M = 64;
  const auto g = chi_grid(M);
  ComplexMatrix tr(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      tr(i, j) = std::exp(a * (std::polar(1.0, g[i]) - 1.0) + b * (std::polar(1.0, g[j]) - 1.0));
  const auto d = invert_counting_2d(tr, 1.0, {0, 1});
  CHECK(d.p(2, 3) == doctest::Approx(poisson(a, 2) * poisson(b, 3)).epsilon(1e-12));
  CHECK(std::abs(d.covariance()) < 1e-12);
  CHECK(std::abs(d.covariance_centered()) < 1e-12);
  CHECK(d.mean(1) == doctest::Approx(b));
  const auto c = connected_joint(d);
  double mx = 0.0;
  for (double v : c) mx = std::max(mx, std::abs(v));
  CHECK(mx < 1e-12);
}

TEST_CASE("quadrants of a correlated joint") {
  // P(n1, n2) on {0,1}^2 with anti-correlation
  const int M = 64;
  const auto g = chi_grid(M);
  ComplexMatrix tr(M, M);
  const double p01 = 0.4, p10 = 0.4, p00 = 0.1, p11 = 0.1;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      tr(i, j) = p00 + p01 * std::polar(1.0, g[j]) + p10 * std::polar(1.0, g[i]) + p11 * std::polar(1.0, g[i] + g[j]);
  const auto d = invert_counting_2d(tr, 1.0, {0, 1});
  CHECK(d.covariance() == doctest::Approx(0.1 - 0.25));
  const auto q = quadrant_sums(d);
  CHECK(q.hi_lo > 0.0);
  CHECK(q.lo_hi > 0.0);
  CHECK(q.hi_hi < 0.0);
  CHECK(q.lo_lo < 0.0);
  CHECK(q.hi_lo + q.lo_hi + q.hi_hi + q.lo_lo == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("total variation and csv") {
  std::vector<double> p = {0.5, 0.5, 0.0}, q = {0.25, 0.5, 0.25};
  CHECK(total_variation(p, q) == doctest::Approx(0.25));
  CountDistribution d;
  d.grid_size = 2;
  d.probs = {0.75, 0.25};
  std::ostringstream os;
  write_csv(d, os);
  CHECK(os.str() == "n,p\n0,0.75\n1,0.25\n");
}
