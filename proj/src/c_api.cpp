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

#include "qjump/qjump.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <new>
#include <string>

#include "qjump/acceptance.hpp"
#include "qjump/counting.hpp"
#include "qjump/dense_oracle.hpp"
#include "qjump/errors.hpp"
#include "qjump/fcs_cmf.hpp"
#include "qjump/fcs_cumulant.hpp"
#include "qjump/io.hpp"
#include "qjump/model.hpp"
#include "qjump/parallel.hpp"
#include "qjump/trajectories.hpp"
#include "qjump/wtd.hpp"

struct qj_params {
  qjump::ModelParams p;
};

struct qj_distribution {
  qjump::CountDistribution d;
};

struct qj_wtd_summary {
  qjump::WtdSummary s;
};

namespace {

thread_local std::string t_last_error;

qj_status fail(qj_status code, const std::string& msg) {
  t_last_error = msg;
  return code;
}

template <class F>
qj_status guarded(F&& body) {
  try {
    t_last_error.clear();
    body();
    return QJ_OK;
  } catch (const qjump::Error& e) {
    return fail(static_cast<qj_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QJ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QJ_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw qjump::InvalidArgument(what);
}

std::vector<int> site_list(const int* sites, size_t n) {
  require(sites != nullptr || n == 0, "site list is null");
  return std::vector<int>(sites, sites + n);
}

void copy_text(const std::string& text, char* out, size_t capacity) {
  if (out == nullptr || capacity == 0) return;
  const size_t n = std::min(text.size(), capacity - 1);
  std::memcpy(out, text.data(), n);
  out[n] = '\0';
}

}  // namespace

extern "C" {

const char* qj_version(void) { return QJUMP_VERSION; }

const char* qj_last_error(void) { return t_last_error.c_str(); }

const char* qj_status_name(qj_status status) {
  return qjump::error_code_name(static_cast<qjump::ErrorCode>(static_cast<int>(status)));
}

void qj_set_threads(int n) { qjump::set_thread_count(n); }

int qj_get_threads(void) { return qjump::thread_count(); }

qj_status qj_params_create(qj_params** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new qj_params{};
  });
}

void qj_params_destroy(qj_params* p) { delete p; }

qj_status qj_params_set(qj_params* p, const char* key, double value) {
  return guarded([&] {
    require(p != nullptr && key != nullptr, "null argument");
    const std::string k(key);
    auto as_int = [&]() {
      require(value == static_cast<double>(static_cast<int>(value)), "integer parameter expected");
      return static_cast<int>(value);
    };
    if (k == "N") {
      p->p.N = as_int();
    } else if (k == "Nc") {
      p->p.Nc = as_int();
    } else if (k == "J") {
      p->p.J = value;
    } else if (k == "h") {
      p->p.h = value;
    } else if (k == "gamma") {
      p->p.gamma = value;
    } else if (k == "alpha") {
      p->p.alpha = value;
    } else {
      throw qjump::InvalidArgument("unknown parameter '" + k + "'");
    }
  });
}

qj_status qj_params_get(const qj_params* p, const char* key, double* value) {
  return guarded([&] {
    require(p != nullptr && key != nullptr && value != nullptr, "null argument");
    const std::string k(key);
    if (k == "N") {
      *value = p->p.N;
    } else if (k == "Nc") {
      *value = p->p.Nc;
    } else if (k == "J") {
      *value = p->p.J;
    } else if (k == "h") {
      *value = p->p.h;
    } else if (k == "gamma") {
      *value = p->p.gamma;
    } else if (k == "alpha") {
      *value = p->p.alpha;
    } else {
      throw qjump::InvalidArgument("unknown parameter '" + k + "'");
    }
  });
}

qj_status qj_params_set_sums(qj_params* p, const char* mode) {
  return guarded([&] {
    require(p != nullptr && mode != nullptr, "null argument");
    p->p.sums = qjump::parse_sum_mode(mode);
  });
}

qj_status qj_params_validate(const qj_params* p) {
  return guarded([&] {
    require(p != nullptr, "params is null");
    qjump::validate(p->p);
  });
}

double qj_mx_star(double h, double J, double gamma) {
  try {
    return qjump::mx_star(h, J, gamma);
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return 0.0;
  }
}

qj_status qj_wtd_analytic_pdf(double J, double h, double gamma, const double* t, size_t n, double* out) {
  return guarded([&] {
    require((t != nullptr && out != nullptr) || n == 0, "null argument");
    const auto w = qjump::make_wtd_analytic(J, h, gamma);
    for (size_t i = 0; i < n; ++i) out[i] = qjump::wtd_analytic_pdf(t[i], w);
  });
}

qj_status qj_wtd_analytic_cdf(double J, double h, double gamma, const double* t, size_t n, double* out) {
  return guarded([&] {
    require((t != nullptr && out != nullptr) || n == 0, "null argument");
    const auto w = qjump::make_wtd_analytic(J, h, gamma);
    for (size_t i = 0; i < n; ++i) out[i] = qjump::wtd_analytic_cdf(t[i], w);
  });
}

qj_status qj_wtd_moments(double J, double h, double gamma, double* mean, double* variance, int* divergent) {
  return guarded([&] {
    require(mean != nullptr && variance != nullptr && divergent != nullptr, "null argument");
    const auto m = qjump::wtd_moments(qjump::make_wtd_analytic(J, h, gamma));
    *mean = m.mean;
    *variance = m.variance;
    *divergent = m.divergent ? 1 : 0;
  });
}

qj_status qj_fcs_dense(const qj_params* p, double t, int M, const int* sites, size_t n_sites,
                       qj_distribution** out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "null argument");
    auto s = site_list(sites, n_sites);
    if (M == 0) M = qjump::required_grid_size(p->p.gamma, t, static_cast<int>(s.size()));
    *out = new qj_distribution{qjump::fcs_dense(p->p, t, M, std::move(s))};
  });
}

qj_status qj_fcs_cmf(const qj_params* p, double t, int M, const int* sites, size_t n_sites, int joint,
                     qj_distribution** out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "null argument");
    *out = new qj_distribution{qjump::reconstruct_pn(p->p, t, M, site_list(sites, n_sites), joint != 0)};
  });
}

qj_status qj_fcs_trajectories(const qj_params* p, double t, int n_traj, uint64_t seed, const int* sites,
                              size_t n_sites, qj_distribution** out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "null argument");
    const auto s = site_list(sites, n_sites);
    const qjump::Generator gen = qjump::full_generator(p->p);
    const auto ens = qjump::mcwf_ensemble(gen.H, gen.decay, qjump::steady_state(gen).matrix, n_traj, t, seed);
    *out = new qj_distribution{qjump::empirical_fcs(ens.records, s, t)};
  });
}

void qj_distribution_destroy(qj_distribution* d) { delete d; }

qj_status qj_distribution_shape(const qj_distribution* d, int* rank, int* grid, size_t* len) {
  return guarded([&] {
    require(d != nullptr, "distribution is null");
    if (rank) *rank = d->d.rank;
    if (grid) *grid = d->d.grid_size;
    if (len) *len = d->d.probs.size();
  });
}

qj_status qj_distribution_probs(const qj_distribution* d, double* out, size_t capacity) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    if (capacity < d->d.probs.size()) throw qjump::DimensionMismatch("output buffer too small");
    std::copy(d->d.probs.begin(), d->d.probs.end(), out);
  });
}

qj_status qj_distribution_moments(const qj_distribution* d, int axis, double* mean, double* variance) {
  return guarded([&] {
    require(d != nullptr, "distribution is null");
    require(axis >= 0 && axis < d->d.rank, "axis out of range");
    if (mean) *mean = d->d.mean(axis);
    if (variance) *variance = d->d.variance(axis);
  });
}

qj_status qj_distribution_covariance(const qj_distribution* d, double* cov) {
  return guarded([&] {
    require(d != nullptr && cov != nullptr, "null argument");
    *cov = d->d.covariance();
  });
}

qj_status qj_distribution_quadrants(const qj_distribution* d, double out[4]) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    const auto q = qjump::quadrant_sums(d->d);
    out[0] = q.hi_lo;
    out[1] = q.lo_hi;
    out[2] = q.hi_hi;
    out[3] = q.lo_lo;
  });
}

qj_status qj_distribution_write_csv(const qj_distribution* d, const char* path) {
  return guarded([&] {
    require(d != nullptr && path != nullptr, "null argument");
    std::ofstream f(path);
    if (!f) throw qjump::IoError(std::string("cannot open ") + path);
    qjump::write_csv(d->d, f);
    if (!f) throw qjump::IoError(std::string("write failed: ") + path);
  });
}

qj_status qj_cmf_magnetization(const qj_params* p, double* mx, size_t capacity, int* converged) {
  return guarded([&] {
    require(p != nullptr && mx != nullptr, "null argument");
    const auto ss = qjump::cmf_steady_state(p->p, {}, true);
    if (capacity < ss.mx.size()) throw qjump::DimensionMismatch("output buffer too small");
    std::copy(ss.mx.begin(), ss.mx.end(), mx);
    if (converged) *converged = ss.converged ? 1 : 0;
  });
}

qj_status qj_cmf_covariance_rate(const qj_params* p, double t_final, double* rate, double* fit_r2) {
  return guarded([&] {
    require(p != nullptr && rate != nullptr, "null argument");
    const auto s = qjump::covariance_growth_rate(p->p, t_final);
    *rate = s.growth_rate;
    if (fit_r2) *fit_r2 = s.fit_r2;
  });
}

qj_status qj_cumulant_covariance_rates(const qj_params* p, const int* distances, size_t n, double delta_chi,
                                       double dt, double t_count_gamma, double* rates, double* fit_r2) {
  return guarded([&] {
    require(p != nullptr && distances != nullptr && rates != nullptr, "null argument");
    qjump::CumulantOptions o;
    if (delta_chi > 0.0) o.delta_chi = delta_chi;
    if (dt > 0.0) o.dt = dt;
    if (t_count_gamma > 0.0) o.t_count_gamma = t_count_gamma;
    const auto r = qjump::covariance_rates(p->p, std::span<const int>(distances, n), o);
    for (size_t i = 0; i < n; ++i) {
      rates[i] = r[i].rate;
      if (fit_r2) fit_r2[i] = r[i].fit_r2;
    }
  });
}

qj_status qj_cumulant_magnetization(const qj_params* p, int single_site, double* mx, size_t capacity) {
  return guarded([&] {
    require(p != nullptr && mx != nullptr, "null argument");
    qjump::CumulantOptions o;
    o.single_site = single_site != 0;
    const auto m = qjump::magnetization_steady(p->p, o, 1e-10, 5000.0, true);
    if (capacity < m.mx.size()) throw qjump::DimensionMismatch("output buffer too small");
    std::copy(m.mx.begin(), m.mx.end(), mx);
  });
}

qj_status qj_wtd_monte_carlo(const qj_params* p, int Nc, size_t n_samples, uint64_t seed, double t_cens_gamma,
                             qj_wtd_summary** out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "null argument");
    qjump::WtdOptions o;
    if (t_cens_gamma > 0.0) o.t_cens_gamma = t_cens_gamma;
    *out = new qj_wtd_summary{qjump::wtd_monte_carlo(p->p, Nc, n_samples, seed, o)};
  });
}

void qj_wtd_summary_destroy(qj_wtd_summary* s) { delete s; }

qj_status qj_wtd_summary_stats(const qj_wtd_summary* s, double* mean, double* variance, double* ci_lo,
                               double* ci_hi, double* censored_frac, int* divergent, size_t* n_samples) {
  return guarded([&] {
    require(s != nullptr, "summary is null");
    if (mean) *mean = s->s.mean;
    if (variance) *variance = s->s.variance;
    if (ci_lo) *ci_lo = s->s.ci_lo;
    if (ci_hi) *ci_hi = s->s.ci_hi;
    if (censored_frac) *censored_frac = s->s.censored_frac;
    if (divergent) *divergent = s->s.divergent ? 1 : 0;
    if (n_samples) *n_samples = s->s.n_samples;
  });
}

qj_status qj_wtd_summary_samples(const qj_wtd_summary* s, double* out, size_t capacity, size_t* len) {
  return guarded([&] {
    require(s != nullptr, "summary is null");
    if (len) *len = s->s.samples.size();
    if (out != nullptr) {
      const size_t n = std::min(capacity, s->s.samples.size());
      std::copy(s->s.samples.begin(), s->s.samples.begin() + static_cast<std::ptrdiff_t>(n), out);
    }
  });
}

qj_status qj_wtd_summary_histogram(const qj_wtd_summary* s, double* t_bin, double* density, size_t capacity,
                                   size_t* len) {
  return guarded([&] {
    require(s != nullptr, "summary is null");
    const auto& h = s->s.histogram;
    if (len) *len = h.size();
    const size_t n = std::min(capacity, h.size());
    for (size_t i = 0; i < n; ++i) {
      if (t_bin) t_bin[i] = h[i].t_bin;
      if (density) density[i] = h[i].density;
    }
  });
}

size_t qj_acceptance_count(void) { return qjump::acceptance_ids().size(); }

const char* qj_acceptance_id(size_t i) {
  static const std::vector<std::string> ids = qjump::acceptance_ids();
  return i < ids.size() ? ids[i].c_str() : nullptr;
}

qj_status qj_acceptance_run(const char* id, uint64_t seed, int* passed, char* detail, size_t capacity) {
  return guarded([&] {
    require(id != nullptr && passed != nullptr, "null argument");
    const auto ids = qjump::acceptance_ids();
    require(std::find(ids.begin(), ids.end(), std::string(id)) != ids.end(), "unknown criterion");
    qjump::AcceptanceOptions o;
    o.seed = seed;
    const auto r = qjump::run_criterion(id, o);
    *passed = r.pass ? 1 : 0;
    copy_text(qjump::format_result(r), detail, capacity);
  });
}

qj_status qj_compare_csv(const char* actual_path, const char* expected_path, const char* const* columns,
                         const double* column_tols, size_t n_columns, double default_abs_tol, double rel_tol,
                         size_t* mismatches, char* report, size_t capacity) {
  return guarded([&] {
    require(actual_path != nullptr && expected_path != nullptr, "null path");
    require(n_columns == 0 || (columns != nullptr && column_tols != nullptr), "null tolerance list");
    std::map<std::string, double> tol;
    for (size_t i = 0; i < n_columns; ++i) tol[columns[i]] = column_tols[i];
    const auto actual = qjump::read_csv(actual_path);
    const auto expected = qjump::read_csv(expected_path);
    const auto diff = qjump::compare_csv(actual, expected, tol, default_abs_tol, rel_tol);
    if (mismatches) *mismatches = diff.size();
    std::string text = diff.empty() ? "match" : std::to_string(diff.size()) + " mismatches";
    for (size_t i = 0; i < std::min<size_t>(diff.size(), 5); ++i) {
      text += "; row " + std::to_string(diff[i].row) + " " + diff[i].column + ": expected " + diff[i].expected +
              " got " + diff[i].actual;
    }
    copy_text(text, report, capacity);
  });
}

}  // extern "C"
