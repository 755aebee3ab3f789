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
#include "qjump/fcs_cmf.hpp"
#include "qjump/lindblad.hpp"
#include "qjump/wtd.hpp"

using namespace qjump;

TEST_CASE("single-site fixed point matches the closed form") {
  ModelParams p;
  p.Nc = 1;
  p.alpha = 0.0;
  p.h = 1.0;
  for (double g : {0.2, 0.5, 0.8}) {
    p.gamma = g;
    const auto ss = cmf_steady_state(p);
    CHECK(ss.converged);
    CHECK(std::abs(ss.mx[0]) == doctest::Approx(mx_star(p.h, p.J, g)).epsilon(1e-7));
  }
  p.gamma = 1.5;
  CHECK(std::abs(cmf_steady_state(p).mx[0]) < 1e-7);
}

TEST_CASE("closed cluster reduces to the master equation") {
  ModelParams p;
  p.N = p.Nc = 3;
  p.alpha = 1.1;
  p.h = 0.7;
  p.gamma = 0.4;
  p.sums = SumMode::FiniteN;
  const CmfHamiltonian H(p);
  CHECK(H.is_constant());
  const auto rho = product_state(3, 0.2, -0.1, 0.4);
  CHECK((cmf_rhs(H, p.gamma, rho) - lindblad_rhs(rho, p)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("tilted pair at zero field stays equal") {
  ModelParams p;
  p.Nc = 2;
  p.N = 2;
  p.gamma = 0.5;
  const auto rho = product_state(2, 0.3, 0.0, -0.5);
  const auto s = make_pair_state(rho, {0.0, 0.0});
  const auto out = evolve_pair(s, p, 2.0);
  CHECK((out.rho_tilted.matrix * std::exp(out.rho_tilted.lognorm) -
         out.rho_mf.matrix * std::exp(out.rho_mf.lognorm))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("stationary counting mean is the jump rate") {
  ModelParams p;
  p.Nc = 1;
  p.alpha = 1.1;
  p.h = 1.0;
  p.gamma = 0.5;
  const auto ss = cmf_steady_state(p);
  const double up = ss.rho(0, 0).real();
  const double t = 6.0;
  const auto d = reconstruct_pn(p, t, 0, {0}, false);
  CHECK(d.total() == doctest::Approx(1.0));
  CHECK(d.mean() == doctest::Approx(4.0 * p.gamma * up * t).epsilon(1e-6));
}

TEST_CASE("helpers") {
  CHECK(central_pair(2) == std::pair<int, int>{0, 1});
  CHECK(central_pair(5) == std::pair<int, int>{1, 2});
  CHECK_THROWS(central_pair(1));
  const std::vector<double> x = {0, 1, 2, 3}, y = {1, 3, 5, 7};
  const auto [slope, r2] = linear_fit(x, y);
  CHECK(slope == doctest::Approx(2.0));
  CHECK(r2 == doctest::Approx(1.0));
}
