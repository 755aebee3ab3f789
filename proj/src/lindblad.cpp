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

#include "qjump/lindblad.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "qjump/errors.hpp"

namespace qjump {

Generator make_generator(ComplexMatrix H, double gamma, std::span<const double> chi) {
  const int n = sites_for_dim(H.rows());
  if (!chi.empty() && static_cast<int>(chi.size()) != n) {
    throw DimensionMismatch("make_generator: chi has " + std::to_string(chi.size()) +
                            " entries for " + std::to_string(n) + " sites");
  }
  Generator gen;
  gen.H = std::move(H);
  gen.decay.assign(static_cast<std::size_t>(n), gamma);
  gen.jump_weight.assign(static_cast<std::size_t>(n), Complex(gamma, 0.0));
  for (std::size_t j = 0; j < chi.size(); ++j) gen.jump_weight[j] = gamma * std::polar(1.0, chi[j]);
  return gen;
}

LindbladKernel::LindbladKernel(const Generator& gen)
    : n_sites_(sites_for_dim(gen.H.rows())), dim_(gen.H.rows()), weights_(gen.jump_weight) {
  if (gen.n_sites() != n_sites_ || static_cast<int>(gen.jump_weight.size()) != n_sites_) {
    throw DimensionMismatch("LindbladKernel: dissipator count does not match Hamiltonian dimension");
  }
  damping_.assign(static_cast<std::size_t>(dim_), 0.0);
  for (std::ptrdiff_t a = 0; a < dim_; ++a) {
    for (int j = 0; j < n_sites_; ++j) {
      // s+ s- = 4 |up><up|, up <=> bit clear
      if ((static_cast<std::size_t>(a) & site_mask(j, n_sites_)) == 0) damping_[a] += 2.0 * gen.decay[j];
    }
  }
  set_hamiltonian(gen.H);
}

void LindbladKernel::set_hamiltonian(const ComplexMatrix& H) {
  if (H.rows() != dim_ || H.cols() != dim_) throw DimensionMismatch("set_hamiltonian: wrong dimension");
  K_ = Complex(0.0, -1.0) * H;
  for (std::ptrdiff_t a = 0; a < dim_; ++a) K_(a, a) -= damping_[a];
  K_adj_ = K_.adjoint();
}

void LindbladKernel::set_jump_weights(std::span<const Complex> weights) {
  if (static_cast<int>(weights.size()) != n_sites_) throw DimensionMismatch("set_jump_weights: size");
  weights_.assign(weights.begin(), weights.end());
}

void LindbladKernel::apply(const ComplexMatrix& rho, ComplexMatrix& out) const {
  out.noalias() = K_ * rho;
  out.noalias() += rho * K_adj_;
  for (int j = 0; j < n_sites_; ++j) {
    const Complex w = 4.0 * weights_[j];
    if (w == Complex(0.0, 0.0)) continue;
    const std::size_t mask = site_mask(j, n_sites_);
    for (std::ptrdiff_t a = 0; a < dim_; ++a) {
      if ((static_cast<std::size_t>(a) & mask) == 0) continue;
      const auto a_up = static_cast<std::ptrdiff_t>(static_cast<std::size_t>(a) ^ mask);
      for (std::ptrdiff_t b = 0; b < dim_; ++b) {
        if ((static_cast<std::size_t>(b) & mask) == 0) continue;
        const auto b_up = static_cast<std::ptrdiff_t>(static_cast<std::size_t>(b) ^ mask);
        out(a, b) += w * rho(a_up, b_up);
      }
    }
  }
}

ComplexMatrix LindbladKernel::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out(dim_, dim_);
  apply(rho, out);
  return out;
}

double LindbladKernel::norm_bound() const {
  const double row = K_.cwiseAbs().rowwise().sum().maxCoeff();
  double jumps = 0.0;
  for (const Complex& w : weights_) jumps += 4.0 * std::abs(w);
  return 2.0 * row + jumps;
}

ComplexMatrix LindbladKernel::superoperator() const {
  const std::ptrdiff_t d = dim_;
  ComplexMatrix L = ComplexMatrix::Zero(d * d, d * d);
  for (std::ptrdiff_t a = 0; a < d; ++a) {
    for (std::ptrdiff_t b = 0; b < d; ++b) {
      const std::ptrdiff_t row = a * d + b;
      for (std::ptrdiff_t c = 0; c < d; ++c) {
        L(row, c * d + b) += K_(a, c);
        L(row, a * d + c) += K_adj_(c, b);
      }
    }
  }
  for (int j = 0; j < n_sites_; ++j) {
    const Complex w = 4.0 * weights_[j];
    if (w == Complex(0.0, 0.0)) continue;
    const std::size_t mask = site_mask(j, n_sites_);
    for (std::ptrdiff_t a = 0; a < d; ++a) {
      if ((static_cast<std::size_t>(a) & mask) == 0) continue;
      const auto a_up = static_cast<std::ptrdiff_t>(static_cast<std::size_t>(a) ^ mask);
      for (std::ptrdiff_t b = 0; b < d; ++b) {
        if ((static_cast<std::size_t>(b) & mask) == 0) continue;
        const auto b_up = static_cast<std::ptrdiff_t>(static_cast<std::size_t>(b) ^ mask);
        L(a * d + b, a_up * d + b_up) += w;
      }
    }
  }
  return L;
}

Complex site_expectation(const ComplexMatrix& rho, int site, PauliLabel label) {
  const int n = sites_for_dim(rho.rows());
  const std::size_t mask = site_mask(site, n);
  Complex sum(0.0, 0.0);
  for (std::ptrdiff_t a = 0; a < rho.rows(); ++a) {
    const bool up = (static_cast<std::size_t>(a) & mask) == 0;
    const auto flipped = static_cast<std::ptrdiff_t>(static_cast<std::size_t>(a) ^ mask);
    switch (label) {
      case PauliLabel::Identity:
        sum += rho(a, a);
        break;
      case PauliLabel::Z:
        sum += up ? rho(a, a) : -rho(a, a);
        break;
      case PauliLabel::X:
        // Tr[rho O] = sum_a rho(a, b) O(b, a) with b = flip(a)
        sum += rho(a, flipped);
        break;
      case PauliLabel::Y:
        // sy |a> = (up ? i : -i) |flip a>
        sum += (up ? Complex(0.0, 1.0) : Complex(0.0, -1.0)) * rho(a, flipped);
        break;
      case PauliLabel::Plus:
        if (!up) sum += 2.0 * rho(a, flipped);
        break;
      case PauliLabel::Minus:
        if (up) sum += 2.0 * rho(a, flipped);
        break;
    }
  }
  return sum;
}

double excited_weight(const ComplexMatrix& rho, int site) {
  const int n = sites_for_dim(rho.rows());
  const std::size_t mask = site_mask(site, n);
  double p_up = 0.0;
  for (std::ptrdiff_t a = 0; a < rho.rows(); ++a) {
    if ((static_cast<std::size_t>(a) & mask) == 0) p_up += rho(a, a).real();
  }
  return 4.0 * p_up;
}

ComplexMatrix apply_jump(const ComplexMatrix& rho, int site) {
  const int n = sites_for_dim(rho.rows());
  const std::size_t mask = site_mask(site, n);
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (std::ptrdiff_t a = 0; a < rho.rows(); ++a) {
    if ((static_cast<std::size_t>(a) & mask) == 0) continue;
    const auto a_up = static_cast<std::ptrdiff_t>(static_cast<std::size_t>(a) ^ mask);
    for (std::ptrdiff_t b = 0; b < rho.cols(); ++b) {
      if ((static_cast<std::size_t>(b) & mask) == 0) continue;
      const auto b_up = static_cast<std::ptrdiff_t>(static_cast<std::size_t>(b) ^ mask);
      out(a, b) = 4.0 * rho(a_up, b_up);
    }
  }
  return out;
}

ComplexMatrix product_state(int n_sites, double bx, double by, double bz) {
  if (bx * bx + by * by + bz * bz > 1.0 + 1e-12) throw InvalidArgument("product_state: |Bloch vector| > 1");
  ComplexMatrix site = 0.5 * (pauli(PauliLabel::Identity) + bx * pauli(PauliLabel::X) +
                              by * pauli(PauliLabel::Y) + bz * pauli(PauliLabel::Z));
  ComplexMatrix rho = site;
  for (int i = 1; i < n_sites; ++i) rho = kron(rho, site);
  return rho;
}

ComplexMatrix propagator(const ComplexMatrix& superop, double t) {
  Eigen::MatrixXcd scaled = t * superop;
  Eigen::MatrixXcd result = scaled.exp();
  return result;
}

}  // namespace qjump
