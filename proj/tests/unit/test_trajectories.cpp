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

#include <sstream>

#include "qjump/dense_oracle.hpp"
#include "qjump/lindblad.hpp"
#include "qjump/model.hpp"
#include "qjump/trajectories.hpp"

using namespace qjump;

namespace {

ModelParams pair_model() {
  ModelParams p;
  p.N = 2;
  p.J = 1.0;
  p.h = 0.6;
  p.gamma = 0.3;
  p.alpha = 0.0;
  p.sums = SumMode::FiniteN;
  return p;
}

}  // namespace

TEST_CASE("seeds") {
  CHECK(trajectory_seed(1, 2) == trajectory_seed(1, 2));
  CHECK(trajectory_seed(1, 2) != trajectory_seed(1, 3));
  CHECK(trajectory_seed(1, 2) != trajectory_seed(2, 2));
  Rng r(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK((u > 0.0 && u < 1.0));
  }
}

TEST_CASE("trajectory is reproducible") {
  const auto p = pair_model();
  ComplexVector psi = ComplexVector::Zero(4);
  psi[0] = 1.0;
  const auto a = mcwf_trajectory(p, psi, 20.0, 99);
  const auto b = mcwf_trajectory(p, psi, 20.0, 99);
  REQUIRE(a.second.events.size() == b.second.events.size());
  CHECK(!a.second.events.empty());
  for (std::size_t i = 0; i < a.second.events.size(); ++i) {
    CHECK(a.second.events[i].time == b.second.events[i].time);
    CHECK(a.second.events[i].site == b.second.events[i].site);
  }
  CHECK(a.first.amplitudes.norm() == doctest::Approx(1.0));
}

TEST_CASE("ensemble average approaches the master equation") {
  const auto p = pair_model();
  const auto rho0 = product_state(2, 0.0, 0.0, 1.0);
  const double t = 1.5;
  const auto ens = mcwf_ensemble(build_full_hamiltonian(p), {p.gamma, p.gamma}, rho0, 4000, t, 11);
  const auto exact = integrate(DensityMatrix{rho0, 0.0}, p, {}, t, Rk4Options{0.001, 1e-12});
  // statistical error of about 1/sqrt(4000) per entry
  CHECK((ens.mean_state - exact.matrix).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("jump records round trip") {
  JumpRecord a;
  a.t_final = 3.0;
  a.events = {{0.125, 0}, {1.5, 1}};
  JumpRecord b;
  b.t_final = 3.0;
  b.events = {{2.25, 1}};
  std::stringstream ss;
  std::vector<JumpRecord> in = {a, b};
  write_jump_records(in, ss);
  const auto out = read_jump_records(ss);
  REQUIRE(out.size() == 2);
  CHECK(out[0].events.size() == 2);
  CHECK(out[0].events[1].time == 1.5);
  CHECK(out[1].events[0].site == 1);
}

TEST_CASE("empirical counts") {
  JumpRecord a;
  a.t_final = 3.0;
  a.events = {{0.5, 0}, {1.0, 1}, {1.5, 0}, {2.5, 0}};
  JumpRecord b;
  b.t_final = 3.0;
  std::vector<JumpRecord> rs = {a, b};
  const std::vector<int> s0 = {0};
  const auto d = empirical_fcs(rs, s0, 2.0);
  CHECK(d.p(0) == doctest::Approx(0.5));
  CHECK(d.p(2) == doctest::Approx(0.5));
  const auto j = empirical_joint_fcs(rs, 0, 1, 2.0);
  CHECK(j.p(2, 1) == doctest::Approx(0.5));
}

TEST_CASE("monitored cluster clicks") {
  // sigma_x drive on one site
  ComplexMatrix H(2, 2);
  H << 0.2, 0.6, 0.6, -0.2;
  MonitoredCluster mc(H, {0.5}, 0);
  ComplexMatrix rho = product_state(1, 0.0, 0.0, -1.0);
  Rng rng(3);
  const auto w = mc.next_click(rho, rng, 1e4);
  CHECK_FALSE(w.censored);
  CHECK(w.wait > 0.0);
  // post-click state is down
  CHECK(std::abs(rho(1, 1) - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("undriven cluster is censored at the horizon") {
  ComplexMatrix H(2, 2);
  H << 0.9, 0.0, 0.0, -0.9;
  MonitoredCluster mc(H, {0.5}, 0);
  ComplexMatrix rho = product_state(1, 0.0, 0.0, -1.0);
  Rng rng(3);
  const auto w = mc.next_click(rho, rng, 1e4);
  CHECK(w.censored);
  CHECK(w.wait == 1e4);
}
