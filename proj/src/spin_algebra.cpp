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

#include "qjump/spin_algebra.hpp"

#include <string>

#include "qjump/errors.hpp"

namespace qjump {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
}

void require_square(const ComplexMatrix& a, const char* op) {
  if (a.rows() != a.cols()) throw DimensionMismatch(std::string(op) + ": matrix is not square");
}

}  // namespace

PauliLabel parse_pauli_label(std::string_view label) {
  if (label == "x") return PauliLabel::X;
  if (label == "y") return PauliLabel::Y;
  if (label == "z") return PauliLabel::Z;
  if (label == "plus") return PauliLabel::Plus;
  if (label == "minus") return PauliLabel::Minus;
  if (label == "identity") return PauliLabel::Identity;
  throw InvalidArgument("unknown Pauli label '" + std::string(label) + "'");
}

ComplexMatrix pauli(PauliLabel label) {
  const Complex i(0.0, 1.0);
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (label) {
    case PauliLabel::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case PauliLabel::Y:
      m(0, 1) = -i;
      m(1, 0) = i;
      break;
    case PauliLabel::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case PauliLabel::Plus:
      m(0, 1) = 2.0;
      break;
    case PauliLabel::Minus:
      m(1, 0) = 2.0;
      break;
    case PauliLabel::Identity:
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      break;
  }
  return m;
}

ComplexMatrix pauli(std::string_view label) { return pauli(parse_pauli_label(label)); }

ComplexMatrix identity(std::ptrdiff_t dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix embed(const SiteOperatorSpec& spec, int n_sites) {
  if (n_sites < 1 || n_sites > kMaxDenseSites) {
    throw DimensionMismatch("embed: n_sites=" + std::to_string(n_sites) + " outside [1, " +
                            std::to_string(kMaxDenseSites) + "]");
  }
  if (spec.site < 0 || spec.site >= n_sites) {
    throw InvalidArgument("embed: site " + std::to_string(spec.site) + " out of range");
  }
  const ComplexMatrix left = identity(std::ptrdiff_t{1} << spec.site);
  const ComplexMatrix right = identity(std::ptrdiff_t{1} << (n_sites - 1 - spec.site));
  return kron(kron(left, pauli(spec.label)), right);
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "add");
  return a + b;
}

ComplexMatrix scale(const ComplexMatrix& a, Complex s) { return s * a; }

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("multiply: inner dimensions differ");
  return a * b;
}

ComplexMatrix adjoint(const ComplexMatrix& a) { return a.adjoint(); }

Complex trace(const ComplexMatrix& a) {
  require_square(a, "trace");
  return a.trace();
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "commutator");
  require_square(a, "commutator");
  return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "anticommutator");
  require_square(a, "anticommutator");
  return a * b + b * a;
}

double frobenius_norm(const ComplexMatrix& a) { return a.norm(); }

double hermiticity_defect(const ComplexMatrix& a) {
  require_square(a, "hermiticity_defect");
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs(const ComplexMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

int sites_for_dim(std::ptrdiff_t dim) {
  int n = 0;
  std::ptrdiff_t d = 1;
  while (d < dim) {
    d <<= 1;
    ++n;
  }
  if (d != dim || dim < 2) throw DimensionMismatch("dimension " + std::to_string(dim) + " is not 2^n");
  return n;
}

}  // namespace qjump
