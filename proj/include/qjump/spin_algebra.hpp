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

#include <complex>
#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

namespace qjump {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. n-spin operators have dimension 2^n,
/// with site 0 as the most significant tensor factor and |up> = index 0.
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

inline constexpr int kMaxDenseSites = 14;

enum class PauliLabel { X, Y, Z, Plus, Minus, Identity };

PauliLabel parse_pauli_label(std::string_view label);

struct SiteOperatorSpec {
  int site = 0;
  PauliLabel label = PauliLabel::Identity;
};

/// 2x2 Pauli matrix. Plus and Minus follow sigma^x +/- i sigma^y (no 1/2).
ComplexMatrix pauli(PauliLabel label);
ComplexMatrix pauli(std::string_view label);

/// Kronecker embedding 1 x ... x op x ... x 1 with op at spec.site.
ComplexMatrix embed(const SiteOperatorSpec& spec, int n_sites);

ComplexMatrix identity(std::ptrdiff_t dim);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, Complex s);
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);
Complex trace(const ComplexMatrix& a);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_norm(const ComplexMatrix& a);

/// max |A - A^dagger|
double hermiticity_defect(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);

/// Number of sites n for a 2^n-dimensional operator; throws otherwise.
int sites_for_dim(std::ptrdiff_t dim);

/// Bit mask selecting `site` in a basis index of an n-site register.
inline std::size_t site_mask(int site, int n_sites) {
  return std::size_t{1} << static_cast<unsigned>(n_sites - 1 - site);
}

}  // namespace qjump
