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
#include <numbers>

#include "qjump/errors.hpp"
#include "qjump/model.hpp"
#include "qjump/spin_algebra.hpp"

using namespace qjump;

namespace {

// direct partial sum plus Euler-Maclaurin tail
double zeta_brute(double s, double q) {
  const int n = 200000;
  double sum = 0.0;
  for (int k = n - 1; k >= 0; --k) sum += std::pow(k + q, -s);
  const double a = n + q;
  return sum + std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
}

}  // namespace

TEST_CASE("hurwitz zeta") {
  CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-13));
  for (double s : {1.1, 1.5, 2.0, 3.0}) {
    for (double q : {0.25, 0.5, 1.0, 1.75}) {
      CHECK(hurwitz_zeta(s, q) == doctest::Approx(zeta_brute(s, q)).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(hurwitz_zeta(1.0, 1.0), InvalidArgument);
}

TEST_CASE("ring distances and kac norm") {
  CHECK(pbc_distance(0, 7, 8) == 1);
  CHECK(pbc_distance(1, 5, 8) == 4);
  CHECK(kac_norm(0.0, 10) == doctest::Approx(10.0));
  CHECK(kac_norm(2.0, 7) == doctest::Approx(2.0 * (1.0 + 0.25 + 1.0 / 9.0)));
  CHECK(kac_norm_thermodynamic(3.0) == doctest::Approx(2.0 * 1.2020569031595942));
  CHECK_THROWS(kac_norm_thermodynamic(1.0));
}

TEST_CASE("coupling table normalization") {
  ModelParams p;
  p.N = 9;
  p.alpha = 1.1;
  p.J = 1.5;
  p.sums = SumMode::FiniteN;
  const CouplingTable c(p);
  for (int i = 0; i < p.N; ++i) {
    CHECK(c(i, i) == 0.0);
    double row = 0.0;
    for (int j = 0; j < p.N; ++j) {
      CHECK(c(i, j) == doctest::Approx(c(j, i)));
      row += c(i, j);
    }
    CHECK(row == doctest::Approx(p.J).epsilon(1e-12));
  }
}

TEST_CASE("hamiltonian for two sites") {
  ModelParams p;
  p.N = 2;
  p.J = 1.0;
  p.h = 0.3;
  p.alpha = 0.0;
  p.sums = SumMode::FiniteN;
  const auto H = build_full_hamiltonian(p);
  ComplexMatrix sx(2, 2), sz(2, 2), id = ComplexMatrix::Identity(2, 2);
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  ComplexMatrix expect = -1.0 * kron(sx, sx);
  expect += 0.3 * (kron(sz, id) + kron(id, sz));
  CHECK((H - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("drive matrix limits") {
  ModelParams p;
  p.Nc = 1;
  p.alpha = 2.0;
  CHECK(drive_matrix(p)(0, 0) == doctest::Approx(1.0));
  p.N = 3;
  p.Nc = 3;
  p.alpha = 0.7;
  CHECK(drive_matrix(p)(1, 2) == doctest::Approx(1.0 / 3.0));
  p.sums = SumMode::FiniteN;
  p.N = 3;
  CHECK(drive_matrix(p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("thermodynamic drive equals lattice sum") {
  ModelParams p;
  p.N = 3;
  p.Nc = 3;
  p.alpha = 3.0;
  const auto G = drive_matrix(p);
  const double norm = 2.0 * hurwitz_zeta(3.0, 1.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int m = 1; m < 200000; ++m) {
        s += std::pow(3.0 * m + j - i, -3.0) + std::pow(3.0 * m + i - j, -3.0);
      }
      CHECK(G(i, j) == doctest::Approx(s / norm).epsilon(1e-9));
    }
  }
  // each row, plus the in-cluster bonds, carries the full normalized coupling
  const double row0 = G.row(0).sum() + (1.0 + std::pow(2.0, -3.0)) / norm;
  CHECK(row0 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("validation") {
  ModelParams p;
  p.gamma = -1.0;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
  p = ModelParams{};
  p.Nc = 0;
  CHECK_THROWS(validate(p));
  p = ModelParams{};
  p.sums = SumMode::FiniteN;
  p.N = 5;
  p.Nc = 2;
  CHECK_THROWS(drive_matrix(p));
  CHECK(parse_sum_mode("finite") == SumMode::FiniteN);
  CHECK(to_string(SumMode::Thermodynamic) == "thermodynamic");
}
