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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qjump/model.hpp"
#include "qjump/spin_algebra.hpp"

namespace qjump {

/// Single-site mean-field waiting-time problem.
struct WtdAnalytic {
  double J = 1.0;
  double h = 1.0;
  double gamma = 0.5;
  double mx_star = 0.0;
  Complex Gamma{0.0, 0.0};  ///< sqrt(4 J^2 m^2 + (h - i gamma)^2)
};

/// Steady single-site magnetization; zero outside the ferromagnetic region.
double mx_star(double h, double J, double gamma);
WtdAnalytic make_wtd_analytic(double J, double h, double gamma);

double wtd_analytic_pdf(double t, const WtdAnalytic& w);
/// Closed-form integral of the pdf over [0, t].
double wtd_analytic_cdf(double t, const WtdAnalytic& w);

struct WtdMoments {
  double mean = 0.0;
  double variance = 0.0;
  bool divergent = false;  ///< mx_star == 0: mean and variance are infinite
};
WtdMoments wtd_moments(const WtdAnalytic& w);

struct HistogramBin {
  double t_bin = 0.0;  ///< bin center
  double density = 0.0;
};

struct WtdSummary {
  double mean = 0.0;      ///< censored samples enter at the horizon
  double variance = 0.0;
  std::size_t n_samples = 0;
  double ci_lo = 0.0;     ///< bootstrap 95% interval of the mean
  double ci_hi = 0.0;
  bool divergent = false;
  double censored_frac = 0.0;
  double t_cens = 0.0;
  std::vector<double> mx;       ///< cluster magnetization that set the drive
  std::vector<double> samples;  ///< uncensored waits, in collection order
  std::vector<HistogramBin> histogram;
};

struct WtdOptions {
  double t_cens_gamma = 200.0;
  int burn_in = 10;
  int replicas = 16;
  int bootstrap = 200;
  int histogram_bins = 60;
  double divergence_threshold = 0.01;
};

/// Monte Carlo waiting times of site 0 of a monitored Nc-site cluster driven
/// by the converged cMF magnetization. p.Nc is overridden by Nc.
WtdSummary wtd_monte_carlo(const ModelParams& p, int Nc, std::size_t n_samples, std::uint64_t seed,
                           const WtdOptions& options = {});

/// Same, with an explicit drive and initial cluster state (empty: steady state).
WtdSummary wtd_monte_carlo(const ModelParams& p, const MeanFieldDrive& drive, std::size_t n_samples,
                           std::uint64_t seed, const ComplexMatrix& rho0, const WtdOptions& options = {});

/// Kolmogorov-Smirnov distance of the samples from a CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
/// Two-sample KS distance.
double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);
/// 99% critical value 1.63 / sqrt(n).
double ks_threshold_99(std::size_t n);

struct WtdSweepRow {
  double alpha = 0.0;
  double h_over_J = 0.0;
  double gamma_over_J = 0.0;
  int Nc = 1;
  double inv_mean = 0.0;  ///< 1 / E[gamma t], 0 when divergent
  double inv_var = 0.0;   ///< 1 / Var[gamma t], 0 when divergent
  double ci_lo = 0.0;     ///< bootstrap interval of inv_mean
  double ci_hi = 0.0;
  double censored_frac = 0.0;
  bool divergent = false;
  std::string status = "ok";
};

/// One row per (gamma, Nc); point failures land in `status`.
std::vector<WtdSweepRow> wtd_sweep(const ModelParams& base, std::span<const double> gammas,
                                   std::span<const int> nc_list, std::size_t n_samples, std::uint64_t seed,
                                   const WtdOptions& options = {});

/// Largest gamma with a finite inverse mean among rows of the given Nc (0 if none).
double finite_mean_extent(std::span<const WtdSweepRow> rows, int Nc);

void write_wtd_sweep_csv(std::span<const WtdSweepRow> rows, std::ostream& out);
void write_histogram_csv(std::span<const HistogramBin> bins, std::ostream& out);

}  // namespace qjump
