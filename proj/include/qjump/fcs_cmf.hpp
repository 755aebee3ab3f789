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

#include <Eigen/Dense>

#include "qjump/counting.hpp"
#include "qjump/lindblad.hpp"
#include "qjump/model.hpp"
#include "qjump/ode.hpp"

namespace qjump {

/// H_cMF as a function of the reference cluster state.
class CmfHamiltonian {
 public:
  explicit CmfHamiltonian(const ModelParams& p);

  std::vector<double> magnetization(const ComplexMatrix& rho) const;
  ComplexMatrix from_mx(std::span<const double> mx) const;
  ComplexMatrix operator()(const ComplexMatrix& rho) const { return from_mx(magnetization(rho)); }

  /// True when the drive matrix vanishes (closed cluster): H is state independent.
  bool is_constant() const { return constant_; }
  const Eigen::MatrixXd& drive() const { return G_; }
  int n_sites() const { return nc_; }

 private:
  int nc_;
  double J_;
  Eigen::MatrixXd G_;
  ComplexMatrix static_;
  std::vector<ComplexMatrix> sx_;
  bool constant_;
};

struct CmfOptions {
  double seed_bx = 0.3;        ///< product-state seed of the reference cluster
  double seed_by = 0.0;
  double seed_bz = -0.5;
  double steady_tol = 1e-10;   ///< Frobenius change per 1/gamma interval
  double t_max_gamma = 5000.0;
  double dt = 0.01;            ///< transient fixed step, halved until converged
  double transient_tol = 1e-9;
};

/// Untilted cMF right-hand side for the reference cluster.
ComplexMatrix cmf_rhs(const CmfHamiltonian& H, double gamma, const ComplexMatrix& rho);

/// Nonlinear untilted cMF evolution from rho0 over time t (adaptive RK4).
ComplexMatrix cmf_evolve(const ModelParams& p, const ComplexMatrix& rho0, double t, const Rk4Options& options = {});

struct CmfSteadyState {
  ComplexMatrix rho;
  std::vector<double> mx;
  double residual = 0.0;
  double t = 0.0;
  bool converged = false;
};

/// Steady state from the seeded product state. Throws ConvergenceError when
/// not settled by t_max unless allow_unconverged is set.
CmfSteadyState cmf_steady_state(const ModelParams& p, const CmfOptions& options = {}, bool allow_unconverged = false);

struct TiltedPairState {
  DensityMatrix rho_tilted;
  DensityMatrix rho_mf;
  CountingField chi;
};

TiltedPairState make_pair_state(const ComplexMatrix& rho0, std::vector<double> chi);

/// Advances both cluster states by dt on a shared RK4 schedule. The tilted
/// cluster feels H_cMF(rho_mf) with e^{i chi_i} on its recycling terms.
TiltedPairState evolve_pair(const TiltedPairState& state, const ModelParams& p, double dt,
                            const Rk4Options& options = {});

enum class CmfStartKind { Stationary, Product, Explicit };

struct CmfStart {
  CmfStartKind kind = CmfStartKind::Stationary;
  double bx = 0.3;
  double by = 0.0;
  double bz = -0.5;
  ComplexMatrix rho;
};

/// Tr rho_chi(t) for each counting-field node (one chi per cluster site) at
/// each ascending time; result[node][time].
std::vector<std::vector<Complex>> cmf_counting_traces(const ModelParams& p, const CmfStart& start,
                                                      const std::vector<std::vector<double>>& nodes,
                                                      std::span<const double> times,
                                                      const CmfOptions& options = {});

/// One counted site or a summed set gives P(n); exactly two sites with
/// joint=true give P(n1, n2). M = 0 picks a default grid.
CountDistribution reconstruct_pn(const ModelParams& p, double t_final, int M, std::vector<int> counted_sites,
                                 bool joint, const CmfStart& start = {}, const CmfOptions& options = {});

/// 0-based central adjacent pair (Nc/2 - 1, Nc/2); (0, 0) is rejected for Nc = 1.
std::pair<int, int> central_pair(int Nc);

struct JointStats {
  double cov = 0.0;
  double cov_centered = 0.0;
  double mean1 = 0.0;
  double mean2 = 0.0;
  double var1 = 0.0;
  double var2 = 0.0;
  double growth_rate = 0.0;  ///< dCov / (gamma dt)
  double fit_r2 = 0.0;
  bool stationary = false;   ///< fit_r2 >= 0.99
  std::vector<double> times;
  std::vector<double> covs;
  int grid_size = 0;
};

JointStats joint_stats(const CountDistribution& joint);

/// Least-squares slope and R^2 of y against x.
std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y);

/// Covariance of the central pair sampled over [t_final/2, t_final] from
/// reconstructed joint distributions; slope taken against gamma t.
JointStats covariance_growth_rate(const ModelParams& p, double t_final, int n_samples = 6, int M = 0,
                                  const CmfStart& start = {}, const CmfOptions& options = {});

}  // namespace qjump
