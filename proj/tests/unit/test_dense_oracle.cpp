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

#include "qjump/dense_oracle.hpp"
#include "qjump/lindblad.hpp"
#include "qjump/model.hpp"

using namespace qjump;

namespace {

ModelParams small(int N) {
  ModelParams p;
  p.N = N;
  p.J = 1.0;
  p.h = 0.8;
  p.gamma = 0.4;
  p.alpha = 1.1;
  p.sums = SumMode::FiniteN;
  return p;
}

}  // namespace

TEST_CASE("generator preserves trace and hermiticity") {
  const auto p = small(3);
  const auto rho = product_state(3, 0.3, -0.2, 0.5);
  const auto d = lindblad_rhs(rho, p);
  CHECK(std::abs(d.trace()) < 1e-14);
  CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("superoperator agrees with kernel") {
  const auto p = small(2);
  const std::vector<double> chi = {0.3, -1.1};
  const LindbladKernel k(full_generator(p, chi));
  const auto S = k.superoperator();
  const auto rho = product_state(2, 0.1, 0.4, -0.3);
  const auto lhs = unvectorize(S * vectorize(rho), 4);
  CHECK((lhs - k.apply(rho)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((k.apply(rho) - lindblad_rhs(rho, p, chi)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("decay from the up state") {
  // with H = 0 the up population decays at 4 gamma
  ModelParams p;
  p.N = 1;
  p.h = 0.0;
  p.gamma = 0.35;
  DensityMatrix rho{product_state(1, 0.0, 0.0, 1.0), 0.0};
  for (double t : {0.5, 1.0, 3.0}) {
    const auto out = integrate(rho, p, {}, t, Rk4Options{0.001, 1e-12});
    const double sz = site_expectation(out.matrix, 0, PauliLabel::Z).real();
    CHECK(sz == doctest::Approx(2.0 * std::exp(-4.0 * p.gamma * t) - 1.0).epsilon(1e-9));
  }
  // at most one click: P(1) = 1 - exp(-4 gamma t)
  const auto d = fcs_dense(p, 2.0, 64, {0}, product_state(1, 0.0, 0.0, 1.0));
  CHECK(d.p(1) == doctest::Approx(1.0 - std::exp(-8.0 * p.gamma)).epsilon(1e-7));
  CHECK(d.p(2) < 1e-12);
}

TEST_CASE("steady state is stationary") {
  const auto p = small(3);
  const auto ss = steady_state(p);
  CHECK(std::abs(ss.matrix.trace() - 1.0) < 1e-12);
  CHECK(lindblad_rhs(ss.matrix, p).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("propagator matches integration") {
  const auto p = small(2);
  const LindbladKernel k(full_generator(p));
  const auto rho = product_state(2, 0.3, 0.0, -0.5);
  const auto P = propagator(k.superoperator(), 1.3);
  const auto a = unvectorize(P * vectorize(rho), 4);
  const auto b = integrate(DensityMatrix{rho, 0.0}, p, {}, 1.3, Rk4Options{0.001, 1e-12});
  CHECK((a - b.matrix * std::exp(b.lognorm)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("dense waiting times are normalized") {
  auto p = small(2);
  const auto times = log_time_grid(1e-4, 200.0, 4000);
  const auto w = wtd_dense(p, 0, times);
  double integral = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) integral += 0.5 * (w[i] + w[i - 1]) * (times[i] - times[i - 1]);
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-4));
}
