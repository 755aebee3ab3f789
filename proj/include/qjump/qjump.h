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

#ifndef QJUMP_QJUMP_H_
#define QJUMP_QJUMP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(QJ_BUILDING_LIBRARY)
#define QJ_API __attribute__((visibility("default")))
#else
#define QJ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qj_status {
  QJ_OK = 0,
  QJ_ERR_INVALID_ARGUMENT = 1,
  QJ_ERR_DIMENSION = 2,
  QJ_ERR_CONVERGENCE = 3,
  QJ_ERR_ALIASING = 4,
  QJ_ERR_STEP_SIZE = 5,
  QJ_ERR_UNPHYSICAL = 6,
  QJ_ERR_UNDEFINED_WTD = 7,
  QJ_ERR_IO = 8,
  QJ_ERR_INTERNAL = 99
} qj_status;

typedef struct qj_params qj_params;
typedef struct qj_distribution qj_distribution;
typedef struct qj_wtd_summary qj_wtd_summary;

/* Library version string, e.g. "0.1.0". */
QJ_API const char* qj_version(void);
/* Message of the last failed call on this thread ("" if none). */
QJ_API const char* qj_last_error(void);
/* Stable lowercase name of a status code. */
QJ_API const char* qj_status_name(qj_status status);

/* Worker threads for parallel loops; n <= 0 restores the default. */
QJ_API void qj_set_threads(int n);
QJ_API int qj_get_threads(void);

/* Model parameters. Keys: "N", "Nc", "J", "h", "gamma", "alpha".
   Defaults: N=2, Nc=1, J=1, h=1, gamma=0.5, alpha=1.1, thermodynamic sums. */
QJ_API qj_status qj_params_create(qj_params** out);
QJ_API void qj_params_destroy(qj_params* p);
QJ_API qj_status qj_params_set(qj_params* p, const char* key, double value);
QJ_API qj_status qj_params_get(const qj_params* p, const char* key, double* value);
/* "thermodynamic" or "finite". */
QJ_API qj_status qj_params_set_sums(qj_params* p, const char* mode);
QJ_API qj_status qj_params_validate(const qj_params* p);

/* ---- single-site mean field and waiting times ---- */
QJ_API double qj_mx_star(double h, double J, double gamma);
QJ_API qj_status qj_wtd_analytic_pdf(double J, double h, double gamma, const double* t, size_t n, double* out);
QJ_API qj_status qj_wtd_analytic_cdf(double J, double h, double gamma, const double* t, size_t n, double* out);
QJ_API qj_status qj_wtd_moments(double J, double h, double gamma, double* mean, double* variance, int* divergent);

/* ---- counting distributions ----
   Site lists are 0-based. M = 0 picks the default grid. */
QJ_API qj_status qj_fcs_dense(const qj_params* p, double t, int M, const int* sites, size_t n_sites,
                              qj_distribution** out);
/* Cluster mean field from the stationary state; joint != 0 needs exactly two sites. */
QJ_API qj_status qj_fcs_cmf(const qj_params* p, double t, int M, const int* sites, size_t n_sites, int joint,
                            qj_distribution** out);
/* Histogram of n_traj trajectories started from the dense steady state. */
QJ_API qj_status qj_fcs_trajectories(const qj_params* p, double t, int n_traj, uint64_t seed, const int* sites,
                                     size_t n_sites, qj_distribution** out);
QJ_API void qj_distribution_destroy(qj_distribution* d);
/* rank 1: len = grid; rank 2: len = grid * grid, row-major in (n1, n2). */
QJ_API qj_status qj_distribution_shape(const qj_distribution* d, int* rank, int* grid, size_t* len);
QJ_API qj_status qj_distribution_probs(const qj_distribution* d, double* out, size_t capacity);
QJ_API qj_status qj_distribution_moments(const qj_distribution* d, int axis, double* mean, double* variance);
QJ_API qj_status qj_distribution_covariance(const qj_distribution* d, double* cov);
/* Quadrant sums of the connected joint: hi_lo, lo_hi, hi_hi, lo_lo. */
QJ_API qj_status qj_distribution_quadrants(const qj_distribution* d, double out[4]);
QJ_API qj_status qj_distribution_write_csv(const qj_distribution* d, const char* path);

/* ---- steady states and covariance rates ---- */
/* Cluster magnetization <sigma^x_i>, Nc entries; converged reports the flag. */
QJ_API qj_status qj_cmf_magnetization(const qj_params* p, double* mx, size_t capacity, int* converged);
/* Central-pair covariance growth rate over [t_final/2, t_final]. */
QJ_API qj_status qj_cmf_covariance_rate(const qj_params* p, double t_final, double* rate, double* fit_r2);
/* Cumulant expansion (finite chain): rate between site 0 and each distance. delta_chi, dt,
   t_count_gamma <= 0 keep the defaults. */
QJ_API qj_status qj_cumulant_covariance_rates(const qj_params* p, const int* distances, size_t n, double delta_chi,
                                              double dt, double t_count_gamma, double* rates, double* fit_r2);
QJ_API qj_status qj_cumulant_magnetization(const qj_params* p, int single_site, double* mx, size_t capacity);

/* ---- Monte Carlo waiting times ---- */
QJ_API qj_status qj_wtd_monte_carlo(const qj_params* p, int Nc, size_t n_samples, uint64_t seed,
                                    double t_cens_gamma, qj_wtd_summary** out);
QJ_API void qj_wtd_summary_destroy(qj_wtd_summary* s);
QJ_API qj_status qj_wtd_summary_stats(const qj_wtd_summary* s, double* mean, double* variance, double* ci_lo,
                                      double* ci_hi, double* censored_frac, int* divergent, size_t* n_samples);
/* Uncensored samples; len receives the full count. */
QJ_API qj_status qj_wtd_summary_samples(const qj_wtd_summary* s, double* out, size_t capacity, size_t* len);
QJ_API qj_status qj_wtd_summary_histogram(const qj_wtd_summary* s, double* t_bin, double* density,
                                          size_t capacity, size_t* len);

/* ---- acceptance suite ---- */
QJ_API size_t qj_acceptance_count(void);
/* Identifier of criterion i ("A1" ...); NULL when out of range. */
QJ_API const char* qj_acceptance_id(size_t i);
QJ_API qj_status qj_acceptance_run(const char* id, uint64_t seed, int* passed, char* detail, size_t capacity);

/* ---- golden comparison ----
   Numeric cells match when |a - b| <= tol + rel_tol |b|, tol from the
   per-column list or default_abs_tol. report receives a short summary. */
QJ_API qj_status qj_compare_csv(const char* actual_path, const char* expected_path, const char* const* columns,
                                const double* column_tols, size_t n_columns, double default_abs_tol,
                                double rel_tol, size_t* mismatches, char* report, size_t capacity);

#ifdef __cplusplus
}
#endif

#endif  /* QJUMP_QJUMP_H_ */
