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

#include <span>
#include <vector>

#include "qjump/spin_algebra.hpp"

namespace qjump {

/// Operator state with an accumulated log-scale: the represented operator is
/// exp(lognorm) * matrix. Untilted states are Hermitian with unit trace.
struct DensityMatrix {
  ComplexMatrix matrix;
  double lognorm = 0.0;

  int n_sites() const { return sites_for_dim(matrix.rows()); }
  Complex trace() const { return matrix.trace(); }
};

/// Per-site counting phases chi_j.
struct CountingField {
  std::vector<double> chi;
};

/// Generator of a (possibly tilted and/or no-click) spin-decay master equation
///   d rho / dt = -i[H, rho] + sum_j (w_j s-_j rho s+_j - gamma_j/2 {s+_j s-_j, rho}).
/// Untilted Lindblad: w_j = gamma_j. Tilted: w_j = gamma_j e^{i chi_j}.
/// No-click on site j: w_j = 0.
struct Generator {
  ComplexMatrix H;
  std::vector<double> decay;
  std::vector<Complex> jump_weight;

  int n_sites() const { return static_cast<int>(decay.size()); }
};

/// Uniform decay gamma on every site, tilted by chi (empty chi = untilted).
Generator make_generator(ComplexMatrix H, double gamma, std::span<const double> chi = {});

/// Applies a Generator without forming superoperators; the jump and
/// anticommutator terms use basis-index arithmetic.
class LindbladKernel {
 public:
  explicit LindbladKernel(const Generator& gen);

  void apply(const ComplexMatrix& rho, ComplexMatrix& out) const;
  ComplexMatrix apply(const ComplexMatrix& rho) const;

  /// Replace the Hamiltonian keeping dissipators (mean-field feedback).
  void set_hamiltonian(const ComplexMatrix& H);
  void set_jump_weights(std::span<const Complex> weights);

  /// Upper bound on the induced max-norm of the generator.
  double norm_bound() const;

  /// Row-major vectorized superoperator, vec(rho)[a*d + b] = rho(a, b).
  ComplexMatrix superoperator() const;

  int n_sites() const { return n_sites_; }
  std::ptrdiff_t dim() const { return dim_; }
  const std::vector<Complex>& jump_weights() const { return weights_; }

 private:
  int n_sites_;
  std::ptrdiff_t dim_;
  std::vector<double> damping_;   // diagonal of (1/2) sum_j gamma_j s+_j s-_j
  std::vector<Complex> weights_;
  ComplexMatrix K_;               // -i H - damping
  ComplexMatrix K_adj_;
};

/// Tr[rho O] for the embedded single-site observable (label on site).
Complex site_expectation(const ComplexMatrix& rho, int site, PauliLabel label);

/// <s+_j s-_j> = 2 (1 + <sz_j>).
double excited_weight(const ComplexMatrix& rho, int site);

/// s-_j rho s+_j.
ComplexMatrix apply_jump(const ComplexMatrix& rho, int site);

/// Product state with every site at Bloch vector (bx, by, bz).
ComplexMatrix product_state(int n_sites, double bx, double by, double bz);

/// exp(t L) as a dense matrix on row-major vectorized operators.
ComplexMatrix propagator(const ComplexMatrix& superop, double t);

inline ComplexVector vectorize(const ComplexMatrix& rho) {
  return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

inline ComplexMatrix unvectorize(const ComplexVector& v, std::ptrdiff_t dim) {
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

}  // namespace qjump
