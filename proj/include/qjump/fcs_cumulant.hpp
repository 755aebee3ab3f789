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

#include "qjump/model.hpp"
#include "qjump/spin_algebra.hpp"

namespace qjump {

/// Log-trace l, first cumulants c_k^a and second cumulants v_kl^ab (k < l)
/// packed as [l, c (N x 3), v (pairs x 9)]; components a, b in {x, y, z}.
class CumulantState {
 public:
  explicit CumulantState(int n_sites);

  int n_sites() const { return n_; }
  static std::size_t size_for(int n_sites);
  static std::size_t pair_index(int k, int l, int n_sites);  ///< k < l

  Complex& log_trace() { return data_[0]; }
  Complex log_trace() const { return data_[0]; }
  Complex& c(int k, int a) { return data_[c_index(k, a)]; }
  Complex c(int k, int a) const { return data_[c_index(k, a)]; }
  /// v_kl^ab for k != l, using v_kl^ab = v_lk^ba.
  Complex v(int k, int l, int a, int b) const;
  void set_v(int k, int l, int a, int b, Complex value);

  ComplexVector& data() { return data_; }
  const ComplexVector& data() const { return data_; }

 private:
  std::size_t c_index(int k, int a) const { return 1 + 3 * static_cast<std::size_t>(k) + static_cast<std::size_t>(a); }
  std::size_t v_index(int k, int l, int a, int b) const;

  int n_;
  ComplexVector data_;
};

/// Uniform product state: every site at (cx, cy, cz), v = 0, l = 0.
CumulantState product_cumulant_state(int n_sites, double cx, double cy, double cz);

/// Cumulants of an explicit (possibly tilted) N-site operator state.
CumulantState cumulants_from_density(const ComplexMatrix& rho);

/// Right-hand side of the second-order truncated hierarchy on a ring with
/// couplings J_ij = J / (r_ij^alpha N_alpha). single_site drops every v.
class CumulantSystem {
 public:
  CumulantSystem(const ModelParams& p, bool single_site = false);

  void rhs(const ComplexVector& y, std::span<const double> chi, ComplexVector& dy) const;
  CumulantState rhs(const CumulantState& s, std::span<const double> chi) const;

  int n_sites() const { return n_; }
  bool single_site() const { return single_site_; }

 private:
  int n_;
  double h_;
  double gamma_;
  bool single_site_;
  Eigen::MatrixXd J_;
};

/// Convenience wrapper: CumulantSystem(p).rhs(state, chi).
CumulantState cumulant_rhs(const CumulantState& state, std::span<const double> chi, const ModelParams& p);

struct CumulantOptions {
  double dt = 0.02;             ///< counting-phase fixed RK4 step (in 1/J units)
  double prerun_gamma = 50.0;   ///< chi = 0 pre-run length, units of 1/gamma
  double t_count_gamma = 20.0;  ///< counting window end, units of 1/gamma
  int samples = 11;             ///< covariance samples over [t_f/2, t_f]
  double delta_chi = 1e-3;
  double richardson_tol = 1e-3;
  double blowup = 10.0;         ///< |c| bound before aborting as unphysical
  bool single_site = false;
  double seed_cx = 0.3;
  double seed_cz = -0.5;
};

/// Evolves state0 under fixed chi to each ascending time (fixed RK4 step dt).
/// Throws UnphysicalError when any |c| exceeds options.blowup.
std::vector<CumulantState> evolve_cumulants(const CumulantState& state0, std::span<const double> chi,
                                            const ModelParams& p, std::span<const double> times,
                                            const CumulantOptions& options = {});

/// chi = 0 state after the seeded pre-run (adaptive RK4).
CumulantState cumulant_prerun(const ModelParams& p, const CumulantOptions& options = {});

struct CovarianceRate {
  int d = 1;
  double rate = 0.0;         ///< dCov(n_0, n_d) / (gamma dt)
  double rate_half = 0.0;    ///< same with delta_chi / 2
  double fit_r2 = 0.0;
  std::vector<double> gamma_t;
  std::vector<double> cov;
};

/// Steady covariance growth rates between site 0 and each site d, from the
/// mixed finite difference of l on the {+-delta}^2 stencil. Throws
/// StepSizeError when the delta and delta/2 stencils disagree.
std::vector<CovarianceRate> covariance_rates(const ModelParams& p, std::span<const int> distances,
                                             const CumulantOptions& options = {});
CovarianceRate covariance_rate(const ModelParams& p, int d, const CumulantOptions& options = {});

/// Mean jump count on site j accumulated over [0, t] from dl/dchi_j (centered difference).
double mean_count_from_cgf(const ModelParams& p, const CumulantState& start, int site, double t,
                           const CumulantOptions& options = {});

struct MagnetizationResult {
  std::vector<double> mx;
  double residual = 0.0;
  bool converged = false;
};

/// Steady c^x profile from the seeded start; converged when the state
/// changes by < tol over 1/gamma. Throws ConvergenceError unless allow_unconverged.
MagnetizationResult magnetization_steady(const ModelParams& p, const CumulantOptions& options = {},
                                         double tol = 1e-10, double t_max_gamma = 5000.0,
                                         bool allow_unconverged = false);

}  // namespace qjump
