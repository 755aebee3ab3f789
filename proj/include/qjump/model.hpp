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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qjump/spin_algebra.hpp"

namespace qjump {

/// How inter-cluster mean-field sums are evaluated. Thermodynamic uses the
/// Hurwitz-zeta closed forms for alpha > 1 and the decoupled strong-long-range
/// field for alpha <= 1; FiniteN sums explicitly over a ring of N sites.
enum class SumMode { Thermodynamic, FiniteN };

struct ModelParams {
  int N = 2;        ///< chain length (sites)
  int Nc = 1;       ///< cluster size (sites)
  double J = 1.0;   ///< ferromagnetic coupling
  double h = 1.0;   ///< transverse field
  double gamma = 0.5;
  double alpha = 1.1;
  SumMode sums = SumMode::Thermodynamic;
};

/// Throws InvalidArgument unless N >= 1, 1 <= Nc <= N, J > 0, h, gamma, alpha >= 0.
void validate(const ModelParams& p);

std::string to_string(SumMode mode);
SumMode parse_sum_mode(const std::string& s);

int pbc_distance(int i, int j, int N);

/// 2 * sum_{r=1}^{floor(N/2)} r^-alpha.
double kac_norm(double alpha, int N);
/// 2 * zeta(alpha, 1); requires alpha > 1.
double kac_norm_thermodynamic(double alpha);

/// Hurwitz zeta sum_{k>=0} (k+q)^-s via Euler-Maclaurin; s > 1, q > 0.
double hurwitz_zeta(double s, double q);

/// J_ij = J / (r_ij^alpha N_alpha) on a ring of N sites with finite-N Kac norm.
class CouplingTable {
 public:
  explicit CouplingTable(const ModelParams& p);
  int size() const { return static_cast<int>(table_.rows()); }
  double operator()(int i, int j) const { return table_(i, j); }
  const Eigen::MatrixXd& matrix() const { return table_; }

 private:
  Eigen::MatrixXd table_;
};

/// Full-chain Hamiltonian -sum_{i<j} 2 J_ij sx_i sx_j + h sum_i sz_i, N <= 12.
ComplexMatrix build_full_hamiltonian(const ModelParams& p);

/// Linear map from cluster magnetizations m_j to the dimensionless drive
/// g_i = sum_j G_ij m_j felt by cluster site i from all other clusters.
Eigen::MatrixXd drive_matrix(const ModelParams& p);

/// Intra-cluster coupling plus field: the m-independent part of H_cMF.
ComplexMatrix build_cluster_static_hamiltonian(const ModelParams& p);

/// H_cMF(m) = static part - 2J sum_i g_i sx_i with g = drive_matrix * m.
ComplexMatrix build_cmf_hamiltonian(const ModelParams& p, std::span<const double> mx);

/// Interaction part -2J mean(mx) sum_i sx_i, the exact mean field for alpha < 1.
ComplexMatrix build_strong_long_range_field(const ModelParams& p, std::span<const double> mx);

struct MeanFieldDrive {
  std::vector<double> g;
  std::vector<double> mx;
};

/// Drive on the monitored cluster from the unmonitored clusters' magnetizations.
MeanFieldDrive monitored_drive(const ModelParams& p, std::span<const double> mx_steady);

/// Hamiltonian of the monitored cluster: intra-cluster part + h field - 2J sum g_i sx_i.
ComplexMatrix build_monitored_hamiltonian(const ModelParams& p, const MeanFieldDrive& drive);

}  // namespace qjump
