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

#include "qjump/counting.hpp"
#include "qjump/lindblad.hpp"
#include "qjump/model.hpp"
#include "qjump/ode.hpp"

namespace qjump {

/// Full-chain generator for params (finite-N couplings) with per-site chi (empty = untilted).
Generator full_generator(const ModelParams& p, std::span<const double> chi = {});

/// -i[H, rho] + gamma sum_j (e^{i chi_j} s-_j rho s+_j - 1/2 {s+_j s-_j, rho}).
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ModelParams& p, std::span<const double> chi = {});

/// RK4 with step-doubling error control on the operator state; the matrix is
/// rescaled into lognorm if its trace falls below 1e-100.
DensityMatrix integrate(const DensityMatrix& rho0, const Generator& gen, double t_final,
                        const Rk4Options& options = {});
DensityMatrix integrate(const DensityMatrix& rho0, const ModelParams& p, std::span<const double> chi,
                        double t_final, const Rk4Options& options = {});

struct SteadyStateOptions {
  double tol = 1e-10;          ///< Frobenius change over one interval
  double interval_gamma = 1.0; ///< interval length in units of 1/gamma
  double t_max_gamma = 5000.0;
  double seed_bx = 0.3;        ///< symmetry-broken product-state start
  double seed_bz = -0.5;
};

/// Steady state of a generator, integrated from a product-state seed.
DensityMatrix steady_state(const Generator& gen, const SteadyStateOptions& options = {});
DensityMatrix steady_state(const ModelParams& p, const SteadyStateOptions& options = {});

/// Tr rho_chi(t) for each node chi_k applied to `counted_sites`, from rho0.
std::vector<Complex> counting_traces(const Generator& untilted, const ComplexMatrix& rho0,
                                     std::span<const int> counted_sites, double t_final, int M);

/// P(n) of the total jump count on `counted_sites` up to t_final.
/// rho0 empty: start from the steady state.
CountDistribution fcs_dense(const ModelParams& p, double t_final, int M, std::vector<int> counted_sites,
                            const ComplexMatrix& rho0 = {});
CountDistribution fcs_dense(const Generator& gen, const ComplexMatrix& rho0, double t_final, int M,
                            std::vector<int> counted_sites);

/// Joint P(n1, n2) for two sites from an M x M grid.
CountDistribution fcs_dense_joint(const Generator& gen, const ComplexMatrix& rho0, double t_final, int M,
                                  int site1, int site2);

/// W(t) = Tr[L_j e^{(L - L_j) t} L_j rho] / Tr[L_j rho], L_j rho = gamma s-_j rho s+_j,
/// evaluated at ascending times. Throws UndefinedWtdError for a dark rho.
std::vector<double> wtd_dense(const Generator& gen, const ComplexMatrix& rho_ss, int site,
                              std::span<const double> times);
std::vector<double> wtd_dense(const ModelParams& p, int site, std::span<const double> times);

/// n points log-spaced in [t_min, t_max].
std::vector<double> log_time_grid(double t_min, double t_max, int n);

}  // namespace qjump
