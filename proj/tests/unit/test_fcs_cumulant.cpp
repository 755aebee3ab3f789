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

#include <functional>
#include <random>

#include "qjump/errors.hpp"
#include "qjump/dense_oracle.hpp"
#include "qjump/fcs_cumulant.hpp"
#include "qjump/spin_algebra.hpp"

using namespace qjump;

namespace {

ModelParams chain(int N, double alpha) {
  ModelParams p;
  p.N = N;
  p.J = 1.0;
  p.h = 0.7;
  p.gamma = 0.3;
  p.alpha = alpha;
  p.sums = SumMode::FiniteN;
  return p;
}

// time derivative of the cumulants via the exact generator
ComplexVector exact_derivative(const ComplexMatrix& rho, const ModelParams& p, std::span<const double> chi) {
  const ComplexMatrix D = lindblad_rhs(rho, p, chi);
  const double e = 1e-6;
  const auto up = cumulants_from_density(rho + e * D);
  const auto dn = cumulants_from_density(rho - e * D);
  return (up.data() - dn.data()) / (2.0 * e);
}

}  // namespace

TEST_CASE("product states have no pair cumulants") {
  const auto s = cumulants_from_density(product_state(3, 0.2, -0.3, 0.4));
  CHECK(std::abs(s.c(1, 0) - Complex(0.2, 0.0)) < 1e-14);
  CHECK(std::abs(s.c(2, 2) - Complex(0.4, 0.0)) < 1e-14);
  CHECK(std::abs(s.v(0, 2, 0, 1)) < 1e-14);
  const auto q = product_cumulant_state(3, 0.2, -0.3, 0.4);
  CHECK((q.data() - s.data()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("cumulant flow matches the generator on product states") {
  const auto p = chain(4, 1.1);
  std::mt19937 rng(3);
  std::normal_distribution<double> nd;
  ComplexMatrix rho = ComplexMatrix::Identity(1, 1);
  for (int k = 0; k < p.N; ++k) {
    ComplexMatrix m(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = Complex(nd(rng) * 0.3, nd(rng) * 0.3);
    m(0, 0) += 0.5;
    m(1, 1) += 0.5;
    rho = kron(rho, m);
  }
  const std::vector<double> chi = {0.4, -0.9, 1.3, 0.2};
  const auto num = exact_derivative(rho, p, chi);
  ComplexVector dy;
  CumulantSystem(p).rhs(cumulants_from_density(rho).data(), chi, dy);
  CHECK((num - dy).cwiseAbs().maxCoeff() < 1e-7 * std::max(1.0, num.cwiseAbs().maxCoeff()));
}

TEST_CASE("cumulant flow matches the generator on gaussian states") {
  // operator built from c and v alone, all higher cumulants zero
  const auto p = chain(5, 0.8);
  const int N = p.N;
  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  auto rc = [&] { return Complex(nd(rng) * 0.3, nd(rng) * 0.3); };
  CumulantState s(N);
  for (int k = 0; k < N; ++k)
    for (int a = 0; a < 3; ++a) s.c(k, a) = rc();
  for (int k = 0; k < N; ++k)
    for (int l = k + 1; l < N; ++l)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) s.set_v(k, l, a, b, rc() * 0.5);
  const PauliLabel labels[4] = {PauliLabel::Identity, PauliLabel::X, PauliLabel::Y, PauliLabel::Z};
  using Ops = std::vector<std::pair<int, int>>;
  std::function<Complex(const Ops&)> moment = [&](const Ops& ops) -> Complex {
    if (ops.empty()) return 1.0;
    const auto f = ops[0];
    const Ops rest(ops.begin() + 1, ops.end());
    Complex r = s.c(f.first, f.second) * moment(rest);
    for (std::size_t j = 0; j < rest.size(); ++j) {
      Ops sub = rest;
      sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(j));
      r += s.v(f.first, rest[j].first, f.second, rest[j].second) * moment(sub);
    }
    return r;
  };
  const std::ptrdiff_t D = std::ptrdiff_t{1} << N;
  ComplexMatrix rho = ComplexMatrix::Zero(D, D);
  for (long code = 0; code < (1L << (2 * N)); ++code) {
    Ops ops;
    ComplexMatrix P = ComplexMatrix::Identity(1, 1);
    for (int k = 0; k < N; ++k) {
      const int q = (code >> (2 * k)) & 3;
      P = kron(P, pauli(labels[q]));
      if (q) ops.push_back({k, q - 1});
    }
    rho += moment(ops) * P / static_cast<double>(D);
  }
  CHECK((cumulants_from_density(rho).data() - s.data()).cwiseAbs().maxCoeff() < 1e-12);
  const std::vector<double> chi = {0.4, -0.9, 1.3, 0.2, 2.1};
  const auto num = exact_derivative(rho, p, chi);
  ComplexVector dy;
  CumulantSystem(p).rhs(s.data(), chi, dy);
  CHECK((num - dy).cwiseAbs().maxCoeff() < 1e-7 * std::max(1.0, num.cwiseAbs().maxCoeff()));
}

TEST_CASE("two sites close exactly") {
  // no third site, so the truncation drops nothing
  auto p = chain(2, 1.1);
  p.gamma = 0.6;
  const auto start = product_cumulant_state(2, 0.3, 0.0, -0.5);
  const double t = 2.0;
  const double mean = mean_count_from_cgf(p, start, 0, t);
  const auto dense = fcs_dense(p, t, 64, {0}, product_state(2, 0.3, 0.0, -0.5));
  CHECK(mean == doctest::Approx(dense.mean()).epsilon(1e-6));
  CHECK(mean > 0.0);
}

TEST_CASE("unphysical blow-up is reported") {
  auto p = chain(4, 0.0);
  CumulantOptions o;
  o.blowup = 0.1;
  CHECK_THROWS_AS(cumulant_prerun(p, o), UnphysicalError);
}
