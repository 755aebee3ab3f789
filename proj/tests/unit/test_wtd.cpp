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
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qjump/trajectories.hpp"
#include "qjump/wtd.hpp"

using namespace qjump;

namespace {

double integrate_to_infinity(const std::function<double(double)>& f) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}

}  // namespace

TEST_CASE("order parameter") {
  CHECK(mx_star(1.0, 1.0, 0.5) == doctest::Approx(std::sqrt(0.75 / 2.0)));
  CHECK(mx_star(1.0, 1.0, 1.2) == 0.0);
  CHECK(mx_star(2.5, 1.0, 0.1) == 0.0);
  CHECK_THROWS(mx_star(1.0, 0.0, 0.5));
}

TEST_CASE("analytic density against quadrature") {
  const auto w = make_wtd_analytic(1.0, 0.9, 0.5);
  REQUIRE(w.mx_star > 0.0);
  auto pdf = [&](double t) { return wtd_analytic_pdf(t, w); };
  const double norm = integrate_to_infinity(pdf);
  const double m1 = integrate_to_infinity([&](double t) { return t * pdf(t); });
  const double m2 = integrate_to_infinity([&](double t) { return t * t * pdf(t); });
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
  const auto mom = wtd_moments(w);
  CHECK_FALSE(mom.divergent);
  CHECK(mom.mean == doctest::Approx(m1).epsilon(1e-8));
  CHECK(mom.variance == doctest::Approx(m2 - m1 * m1).epsilon(1e-8));
  for (double t : {0.3, 2.0, 9.0}) {
    const double c = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(pdf, 0.0, t, 10, 1e-13);
    CHECK(wtd_analytic_cdf(t, w) == doctest::Approx(c).epsilon(1e-10));
  }
}

TEST_CASE("paramagnetic moments diverge") {
  const auto w = make_wtd_analytic(1.0, 0.9, 1.5);
  const auto m = wtd_moments(w);
  CHECK(m.divergent);
  CHECK(std::isinf(m.mean));
  CHECK(wtd_analytic_cdf(1e6, w) < 1e-12);
}

TEST_CASE("kolmogorov-smirnov helpers") {
  Rng rng(17);
  std::vector<double> u(4000), v(4000);
  for (auto& x : u) x = rng.uniform();
  for (auto& x : v) x = rng.uniform();
  const auto cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_statistic(u, cdf) < ks_threshold_99(u.size()));
  CHECK(ks_statistic_two_sample(u, v) < ks_threshold_99(u.size()) * std::sqrt(2.0));
  for (auto& x : v) x = x * x;
  CHECK(ks_statistic(v, cdf) > ks_threshold_99(v.size()));
  CHECK(ks_threshold_99(100) == doctest::Approx(0.163));
}

TEST_CASE("single-site Monte Carlo mean") {
  ModelParams p;
  p.alpha = 0.0;
  p.h = 0.9;
  p.gamma = 0.5;
  const auto s = wtd_monte_carlo(p, 1, 3000, 42);
  const auto m = wtd_moments(make_wtd_analytic(p.J, p.h, p.gamma));
  CHECK_FALSE(s.divergent);
  CHECK(s.censored_frac == 0.0);
  CHECK(s.ci_lo < s.ci_hi);
  // five standard errors
  CHECK(std::abs(s.mean - m.mean) < 5.0 * std::sqrt(m.variance / 3000.0));
  const auto again = wtd_monte_carlo(p, 1, 3000, 42);
  CHECK(again.samples == s.samples);
  double area = 0.0;
  const double width = s.histogram[1].t_bin - s.histogram[0].t_bin;
  for (const auto& b : s.histogram) area += b.density * width;
  CHECK(area == doctest::Approx(0.995).epsilon(0.01));
}

TEST_CASE("paramagnetic Monte Carlo is censored") {
  ModelParams p;
  p.alpha = 0.0;
  p.h = 0.9;
  p.gamma = 2.0;
  WtdOptions o;
  o.t_cens_gamma = 50.0;
  const auto s = wtd_monte_carlo(p, 1, 1000, 1, o);
  CHECK(s.divergent);
  CHECK(s.censored_frac > 0.5);
}

TEST_CASE("sweep extent") {
  std::vector<WtdSweepRow> rows(4);
  const double g[] = {0.1, 0.2, 0.3, 0.4};
  for (int i = 0; i < 4; ++i) {
    rows[i].gamma_over_J = g[i];
    rows[i].Nc = 2;
    rows[i].inv_mean = i < 2 ? 1.0 : 0.0;
    rows[i].divergent = i >= 2;
  }
  CHECK(finite_mean_extent(rows, 2) == doctest::Approx(0.2));
}
