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

#include "qjump/spin_algebra.hpp"

using namespace qjump;

TEST_CASE("pauli algebra") {
  const auto x = pauli(PauliLabel::X), y = pauli(PauliLabel::Y), z = pauli(PauliLabel::Z);
  const Complex i{0.0, 1.0};
  CHECK(max_abs(commutator(x, y) - 2.0 * i * z) < 1e-15);
  CHECK(max_abs(anticommutator(x, x) - 2.0 * identity(2)) < 1e-15);
  // sigma+ = sigma_x + i sigma_y, raising towards index 0 (up)
  const auto sp = pauli(PauliLabel::Plus), sm = pauli(PauliLabel::Minus);
  CHECK(max_abs(sp - (x + i * y)) < 1e-15);
  CHECK(sp(0, 1) == Complex(2.0, 0.0));
  CHECK(max_abs(sm - adjoint(sp)) < 1e-15);
  CHECK(z(0, 0).real() == 1.0);
  CHECK(max_abs(sp * sm - 2.0 * (identity(2) + z)) < 1e-15);
}

TEST_CASE("labels parse") {
  CHECK(parse_pauli_label("x") == PauliLabel::X);
  CHECK(parse_pauli_label("plus") == PauliLabel::Plus);
  CHECK_THROWS(parse_pauli_label("q"));
  CHECK(max_abs(pauli("z") - pauli(PauliLabel::Z)) == 0.0);
}

TEST_CASE("embedding puts site 0 first") {
  const auto e = embed({0, PauliLabel::Z}, 3);
  const auto k = kron(kron(pauli("z"), identity(2)), identity(2));
  CHECK(e.rows() == 8);
  CHECK(max_abs(e - k) < 1e-15);
  CHECK(site_mask(0, 3) == 4u);
  CHECK(sites_for_dim(8) == 3);
  CHECK(trace(embed({2, PauliLabel::X}, 3)) == Complex(0.0, 0.0));
}

TEST_CASE("matrix helpers") {
  ComplexMatrix a(2, 2);
  a << Complex(1, 0), Complex(0, 2), Complex(0, -2), Complex(3, 0);
  CHECK(hermiticity_defect(a) < 1e-15);
  CHECK(frobenius_norm(a) == doctest::Approx(std::sqrt(1.0 + 4 + 4 + 9)));
  CHECK(max_abs(multiply(a, identity(2)) - a) == 0.0);
  CHECK(max_abs(scale(a, 2.0) - add(a, a)) == 0.0);
}
