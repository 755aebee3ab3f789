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

#include "qjump/model.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "qjump/errors.hpp"

namespace qjump {

namespace {

bool zeta_closed_form(const ModelParams& p) {
  return p.sums == SumMode::Thermodynamic && p.alpha > 1.0;
}

bool strong_long_range(const ModelParams& p) {
  return p.sums == SumMode::Thermodynamic && p.alpha <= 1.0;
}

void require_finite_ring(const ModelParams& p) {
  if (p.N % p.Nc != 0) {
    throw InvalidArgument("finite-N cluster sums need N to be a multiple of Nc (N=" +
                          std::to_string(p.N) + ", Nc=" + std::to_string(p.Nc) + ")");
  }
}

std::vector<ComplexMatrix> site_ops(PauliLabel label, int n) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ops.push_back(embed({i, label}, n));
  return ops;
}

}  // namespace

void validate(const ModelParams& p) {
  if (p.N < 1) throw InvalidArgument("N must be >= 1");
  if (p.Nc < 1 || p.Nc > p.N) throw InvalidArgument("Nc must satisfy 1 <= Nc <= N");
  if (!(p.J > 0.0)) throw InvalidArgument("J must be > 0");
  if (!(p.h >= 0.0)) throw InvalidArgument("h must be >= 0");
  if (!(p.gamma >= 0.0)) throw InvalidArgument("gamma must be >= 0");
  if (!(p.alpha >= 0.0)) throw InvalidArgument("alpha must be >= 0");
}

std::string to_string(SumMode mode) {
  return mode == SumMode::Thermodynamic ? "thermodynamic" : "finite";
}

SumMode parse_sum_mode(const std::string& s) {
  if (s == "thermodynamic") return SumMode::Thermodynamic;
  if (s == "finite") return SumMode::FiniteN;
  throw InvalidArgument("unknown sum mode '" + s + "' (expected thermodynamic|finite)");
}

int pbc_distance(int i, int j, int N) {
  if (N < 1 || i < 0 || j < 0 || i >= N || j >= N) {
    throw InvalidArgument("pbc_distance: indices (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") out of range for N=" + std::to_string(N));
  }
  const int d = std::abs(i - j);
  return std::min(d, N - d);
}

double kac_norm(double alpha, int N) {
  if (N < 1) throw InvalidArgument("kac_norm: N must be >= 1");
  double sum = 0.0;
  for (int r = N / 2; r >= 1; --r) sum += std::pow(static_cast<double>(r), -alpha);
  return 2.0 * sum;
}

double kac_norm_thermodynamic(double alpha) {
  if (!(alpha > 1.0)) {
    throw InvalidArgument("kac_norm: thermodynamic limit diverges for alpha <= 1");
  }
  return 2.0 * hurwitz_zeta(alpha, 1.0);
}

double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0)) throw InvalidArgument("hurwitz_zeta: series diverges for s <= 1");
  if (!(q > 0.0)) throw InvalidArgument("hurwitz_zeta: q must be > 0");

  // B_{2j} / (2j)!
  static constexpr double kBernoulliOverFactorial[] = {
      1.0 / 12.0,
      -1.0 / 720.0,
      1.0 / 30240.0,
      -1.0 / 1209600.0,
      1.0 / 47900160.0,
      -691.0 / 1307674368000.0,
      1.0 / 74724249600.0,
      -3617.0 / 10670622842880000.0,
      43867.0 / 5109094217170944000.0,
      -174611.0 / 802857662698291200000.0,
  };

  const int shift = std::max(12, static_cast<int>(std::ceil(s)));
  double sum = 0.0;
  for (int k = shift - 1; k >= 0; --k) sum += std::pow(q + k, -s);

  const double x = q + shift;
  double tail = std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  // rising factorial s (s+1) ... (s+2j-2) times x^{-s-2j+1}
  double term = s * std::pow(x, -s - 1.0);
  for (int j = 0; j < 10; ++j) {
    const double contrib = kBernoulliOverFactorial[j] * term;
    tail += contrib;
    if (std::abs(contrib) < 1e-17 * std::abs(sum + tail)) break;
    term *= (s + 2 * j + 1) * (s + 2 * j + 2) / (x * x);
  }
  return sum + tail;
}

CouplingTable::CouplingTable(const ModelParams& p) : table_(Eigen::MatrixXd::Zero(p.N, p.N)) {
  validate(p);
  if (p.N < 2) return;
  const double norm = kac_norm(p.alpha, p.N);
  for (int i = 0; i < p.N; ++i) {
    for (int j = 0; j < p.N; ++j) {
      if (i == j) continue;
      const double r = pbc_distance(i, j, p.N);
      table_(i, j) = p.J / (std::pow(r, p.alpha) * norm);
    }
  }
}

ComplexMatrix build_full_hamiltonian(const ModelParams& p) {
  validate(p);
  if (p.N > 12) throw DimensionMismatch("build_full_hamiltonian: N > 12 exceeds the dense cap");
  const auto sx = site_ops(PauliLabel::X, p.N);
  const auto sz = site_ops(PauliLabel::Z, p.N);
  const CouplingTable couplings(p);
  const auto dim = std::ptrdiff_t{1} << p.N;
  ComplexMatrix H = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < p.N; ++i) {
    for (int j = i + 1; j < p.N; ++j) H -= 2.0 * couplings(i, j) * (sx[i] * sx[j]);
    H += p.h * sz[i];
  }
  return H;
}

Eigen::MatrixXd drive_matrix(const ModelParams& p) {
  validate(p);
  const int nc = p.Nc;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nc, nc);
  if (strong_long_range(p)) {
    G.setConstant(1.0 / nc);
    return G;
  }
  if (zeta_closed_form(p)) {
    const double zeta1 = hurwitz_zeta(p.alpha, 1.0);
    const double scale = std::pow(static_cast<double>(nc), -p.alpha) / (2.0 * zeta1);
    for (int i = 0; i < nc; ++i) {
      for (int j = 0; j < nc; ++j) {
        const double q_right = static_cast<double>(j - i) / nc + 1.0;
        const double q_left = static_cast<double>(i - j) / nc + 1.0;
        G(i, j) = scale * (hurwitz_zeta(p.alpha, q_right) + hurwitz_zeta(p.alpha, q_left));
      }
    }
    return G;
  }
  require_finite_ring(p);
  if (p.N < 2) return G;
  const double norm = kac_norm(p.alpha, p.N);
  for (int i = 0; i < nc; ++i) {
    for (int site = nc; site < p.N; ++site) {
      const double r = pbc_distance(i, site, p.N);
      G(i, site % nc) += std::pow(r, -p.alpha) / norm;
    }
  }
  return G;
}

ComplexMatrix build_cluster_static_hamiltonian(const ModelParams& p) {
  validate(p);
  if (p.Nc > 12) throw DimensionMismatch("cluster Hamiltonian: Nc > 12 exceeds the dense cap");
  const int nc = p.Nc;
  const auto sx = site_ops(PauliLabel::X, nc);
  const auto sz = site_ops(PauliLabel::Z, nc);
  const auto dim = std::ptrdiff_t{1} << nc;
  ComplexMatrix H = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < nc; ++i) H += p.h * sz[i];
  if (strong_long_range(p) || nc < 2) return H;

  double norm = 0.0;
  if (zeta_closed_form(p)) {
    norm = kac_norm_thermodynamic(p.alpha);
  } else {
    require_finite_ring(p);
    norm = kac_norm(p.alpha, p.N);
  }
  for (int i = 0; i < nc; ++i) {
    for (int j = i + 1; j < nc; ++j) {
      const double r = zeta_closed_form(p) ? static_cast<double>(j - i) : pbc_distance(i, j, p.N);
      // ordered double sum over i != j
      H -= (2.0 * p.J / (norm * std::pow(r, p.alpha))) * (sx[i] * sx[j]);
    }
  }
  return H;
}

ComplexMatrix build_cmf_hamiltonian(const ModelParams& p, std::span<const double> mx) {
  validate(p);
  if (static_cast<int>(mx.size()) != p.Nc) {
    throw DimensionMismatch("build_cmf_hamiltonian: mx has " + std::to_string(mx.size()) +
                            " entries, expected Nc=" + std::to_string(p.Nc));
  }
  return build_monitored_hamiltonian(p, monitored_drive(p, mx));
}

ComplexMatrix build_strong_long_range_field(const ModelParams& p, std::span<const double> mx) {
  validate(p);
  if (static_cast<int>(mx.size()) != p.Nc) {
    throw DimensionMismatch("build_strong_long_range_field: mx must have Nc entries");
  }
  double mean = 0.0;
  for (double m : mx) mean += m;
  mean /= static_cast<double>(mx.size());
  const auto dim = std::ptrdiff_t{1} << p.Nc;
  ComplexMatrix H = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < p.Nc; ++i) H -= 2.0 * p.J * mean * embed({i, PauliLabel::X}, p.Nc);
  return H;
}

MeanFieldDrive monitored_drive(const ModelParams& p, std::span<const double> mx_steady) {
  if (static_cast<int>(mx_steady.size()) != p.Nc) {
    throw DimensionMismatch("monitored_drive: mx must have Nc entries");
  }
  const Eigen::MatrixXd G = drive_matrix(p);
  MeanFieldDrive drive;
  drive.mx.assign(mx_steady.begin(), mx_steady.end());
  drive.g.assign(static_cast<std::size_t>(p.Nc), 0.0);
  for (int i = 0; i < p.Nc; ++i) {
    for (int j = 0; j < p.Nc; ++j) drive.g[i] += G(i, j) * mx_steady[j];
  }
  return drive;
}

ComplexMatrix build_monitored_hamiltonian(const ModelParams& p, const MeanFieldDrive& drive) {
  if (static_cast<int>(drive.g.size()) != p.Nc) {
    throw DimensionMismatch("monitored Hamiltonian: drive must have Nc entries");
  }
  ComplexMatrix H = build_cluster_static_hamiltonian(p);
  for (int i = 0; i < p.Nc; ++i) H -= 2.0 * p.J * drive.g[i] * embed({i, PauliLabel::X}, p.Nc);
  return H;
}

}  // namespace qjump
