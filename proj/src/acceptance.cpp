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

#include "qjump/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qjump/counting.hpp"
#include "qjump/dense_oracle.hpp"
#include "qjump/errors.hpp"
#include "qjump/fcs_cmf.hpp"
#include "qjump/fcs_cumulant.hpp"
#include "qjump/lindblad.hpp"
#include "qjump/parallel.hpp"
#include "qjump/trajectories.hpp"
#include "qjump/wtd.hpp"

namespace qjump {

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [x]");
  }
};

std::string num(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

ModelParams chain(int N, double h, double gamma, double alpha) {
  ModelParams p;
  p.N = N;
  p.Nc = 1;
  p.J = 1.0;
  p.h = h;
  p.gamma = gamma;
  p.alpha = alpha;
  p.sums = SumMode::FiniteN;
  return p;
}

ModelParams cluster(int Nc, double h, double gamma, double alpha) {
  ModelParams p;
  p.N = Nc;
  p.Nc = Nc;
  p.J = 1.0;
  p.h = h;
  p.gamma = gamma;
  p.alpha = alpha;
  p.sums = SumMode::Thermodynamic;
  return p;
}

Rk4Options tight() {
  Rk4Options o;
  o.rel_tol = 1e-12;
  o.dt = 0.005;
  o.dt_max = 0.1;
  return o;
}

double trace_of(const DensityMatrix& rho) { return (rho.matrix.trace() * std::exp(rho.lognorm)).real(); }

Check a1(const AcceptanceOptions& o) {
  Check c;
  const ModelParams p = chain(3, 1.0, 0.5, 1.1);
  const double t = 2.0 / p.gamma;
  const Generator gen = full_generator(p);
  const ComplexMatrix rho = steady_state(gen).matrix;
  const std::vector<int> sites = {0, 1, 2};
  const CountDistribution exact = fcs_dense(gen, rho, t, required_grid_size(p.gamma, t, 3), sites);
  const auto ens = mcwf_ensemble(gen.H, gen.decay, rho, 10000, t, o.seed);
  const CountDistribution mc = empirical_fcs(ens.records, sites, t);
  const double tv = total_variation(exact.probs, mc.probs);
  c.require(tv < 0.03, "TV(dense, 1e4 trajectories) = " + num(tv) + " < 0.03");
  return c;
}

Check a2(const AcceptanceOptions&) {
  Check c;
  const ModelParams p = chain(3, 1.0, 0.5, 1.1);
  const Generator gen = full_generator(p);
  DensityMatrix rho{product_state(3, 0.3, 0.0, -0.5), 0.0};
  double worst_dense = 0.0;
  for (int k = 1; k <= 20; ++k) {
    rho = integrate(rho, gen, 1.0 / p.gamma);
    worst_dense = std::max(worst_dense, std::abs(trace_of(rho) - 1.0));
  }
  c.require(worst_dense < 1e-8, "dense max|Tr-1| = " + num(worst_dense));

  const ModelParams q = cluster(2, 1.0, 0.5, 1.1);
  std::vector<double> times;
  for (int k = 1; k <= 20; ++k) times.push_back(k / q.gamma);
  const std::vector<std::vector<double>> nodes = {{0.0, 0.0}};
  double worst_cmf = 0.0;
  for (CmfStartKind kind : {CmfStartKind::Stationary, CmfStartKind::Product}) {
    CmfStart start;
    start.kind = kind;
    const auto tr = cmf_counting_traces(q, start, nodes, times);
    for (const Complex& z : tr.front()) worst_cmf = std::max(worst_cmf, std::abs(z - 1.0));
  }
  c.require(worst_cmf < 1e-8, "cMF max|Tr-1| = " + num(worst_cmf));
  return c;
}

Check a3(const AcceptanceOptions&) {
  Check c;
  ModelParams p = chain(3, 1.0, 0.5, 1.1);
  p.Nc = 3;
  c.require(CmfHamiltonian(p).is_constant(), "drive zeroed");
  const double t = 10.0 / p.gamma;
  const ComplexMatrix rho0 = product_state(3, 0.3, 0.0, -0.5);
  const ComplexMatrix cm = cmf_evolve(p, rho0, t, tight());
  const DensityMatrix dn = integrate(DensityMatrix{rho0, 0.0}, full_generator(p), t, tight());
  const double dist = (cm - dn.matrix * std::exp(dn.lognorm)).norm();
  c.require(dist < 1e-7, "||rho_cMF - rho_dense||_F = " + num(dist));

  // tilted traces through the counting path
  CmfStart start;
  start.kind = CmfStartKind::Explicit;
  start.rho = rho0;
  const std::vector<double> chi = {0.7, -0.4, 1.9};
  const double times[] = {t};
  const auto tr = cmf_counting_traces(p, start, {chi}, times);
  const DensityMatrix dt = integrate(DensityMatrix{rho0, 0.0}, full_generator(p, chi), t, tight());
  const Complex ref = dt.matrix.trace() * std::exp(dt.lognorm);
  const double td = std::abs(tr.front().front() - ref);
  c.require(td < 1e-7, "tilted trace gap = " + num(td));
  return c;
}

Check a4(const AcceptanceOptions& o) {
  Check c;
  ModelParams p = chain(1, 0.0, 0.5, 1.1);
  const std::vector<double> times = {0.1, 0.25, 0.5, 1.0, 2.0, 3.0};
  auto exact = [&](double t) { return 2.0 * std::exp(-4.0 * p.gamma * t) - 1.0; };
  const ComplexMatrix up = product_state(1, 0.0, 0.0, 1.0);

  const Generator gen = full_generator(p);
  DensityMatrix rho{up, 0.0};
  double prev = 0.0;
  double dense_err = 0.0;
  for (double t : times) {
    rho = integrate(rho, gen, t - prev, tight());
    prev = t;
    const double sz = (site_expectation(rho.matrix, 0, PauliLabel::Z) / rho.matrix.trace()).real();
    dense_err = std::max(dense_err, std::abs(sz - exact(t)));
  }
  c.require(dense_err < 1e-6, "dense err " + num(dense_err));

  const int n = 10000;
  const auto ens = mcwf_ensemble(gen.H, gen.decay, up, n, times.back(), o.seed + 4);
  double worst_sigma = 0.0;
  for (double t : times) {
    int jumped = 0;
    for (const auto& r : ens.records) {
      if (!r.events.empty() && r.events.front().time <= t) ++jumped;
    }
    const double sz = 1.0 - 2.0 * jumped / static_cast<double>(n);
    const double e = exact(t);
    const double sigma = std::sqrt(std::max(1.0 - e * e, 1e-12) / n);
    worst_sigma = std::max(worst_sigma, std::abs(sz - e) / sigma);
  }
  c.require(worst_sigma < 3.0, "trajectories worst |dev|/sigma " + num(worst_sigma));

  const auto cum = evolve_cumulants(product_cumulant_state(1, 0.0, 0.0, 1.0), {}, p, times);
  double cum_err = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    cum_err = std::max(cum_err, std::abs(cum[i].c(0, 2).real() - exact(times[i])));
  }
  c.require(cum_err < 1e-6, "cumulant err " + num(cum_err));
  return c;
}

Check a5(const AcceptanceOptions&) {
  Check c;
  double worst_fm = 0.0;
  double worst_pm = 0.0;
  int n_fm = 0;
  int n_pm = 0;
  std::vector<std::pair<double, double>> grid;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) grid.push_back({0.1 + 0.2 * i, 0.1 + 0.2 * j});
  }
  std::vector<double> mx(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    const ModelParams p = cluster(1, grid[k].first, grid[k].second, 1.1);
    mx[k] = std::abs(cmf_steady_state(p, {}, true).mx[0]);
  });
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto [h, g] = grid[k];
    const double ref = mx_star(h, 1.0, g);
    if (-h * h + 2.0 * h - g * g <= 0.0) {
      ++n_pm;
      worst_pm = std::max(worst_pm, mx[k]);
    } else {
      ++n_fm;
      worst_fm = std::max(worst_fm, std::abs(mx[k] - ref));
    }
  }
  c.require(worst_fm < 1e-4, std::to_string(n_fm) + " FM points max|m-m*| = " + num(worst_fm));
  c.require(worst_pm < 1e-8, std::to_string(n_pm) + " PM points max|m| = " + num(worst_pm));
  return c;
}

Check a6(const AcceptanceOptions& o) {
  Check c;
  const double h = 1.0;
  const double gamma = 0.5;
  const WtdAnalytic w = make_wtd_analytic(1.0, h, gamma);
  const double decay = 2.0 * (gamma - std::abs(w.Gamma.imag()));
  const double t_end = 80.0 / decay;
  const double chunk = std::numbers::pi / std::max(std::abs(w.Gamma.real()), 0.1);
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (double a = 0.0; a < t_end; a += chunk) {
    const double b = std::min(a + chunk, t_end);
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    m0 += GK::integrate([&](double t) { return wtd_analytic_pdf(t, w); }, a, b, 8, 1e-14);
    m1 += GK::integrate([&](double t) { return t * wtd_analytic_pdf(t, w); }, a, b, 8, 1e-14);
    m2 += GK::integrate([&](double t) { return t * t * wtd_analytic_pdf(t, w); }, a, b, 8, 1e-14);
  }
  const WtdMoments mom = wtd_moments(w);
  const double var_q = m2 - m1 * m1;
  c.require(std::abs(m0 - 1.0) < 1e-8, "norm-1 = " + num(m0 - 1.0));
  c.require(std::abs(m1 - mom.mean) < 1e-6 && std::abs(var_q - mom.variance) < 1e-6,
            "E " + num(mom.mean, 6) + " Var " + num(mom.variance, 6) + " vs quadrature gaps " +
                num(std::abs(m1 - mom.mean)) + ", " + num(std::abs(var_q - mom.variance)));

  const ModelParams p = cluster(1, h, gamma, 1.1);
  const WtdSummary mc = wtd_monte_carlo(p, 1, 10000, o.seed + 6);
  const double ks = ks_statistic(mc.samples, [&](double t) { return wtd_analytic_cdf(t, w); });
  const double thr = ks_threshold_99(mc.samples.size());
  c.require(mc.censored_frac == 0.0 && ks < thr, "MC KS " + num(ks) + " < " + num(thr));

  MeanFieldDrive drive;
  drive.g = {w.mx_star};
  drive.mx = {w.mx_star};
  const Generator gen = make_generator(build_monitored_hamiltonian(p, drive), gamma);
  const ComplexMatrix rho_ss = steady_state(gen).matrix;
  std::vector<double> times;
  for (int k = 1; k <= 300; ++k) times.push_back(0.1 * k);
  const auto W = wtd_dense(gen, rho_ss, 0, times);
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) worst = std::max(worst, std::abs(W[k] - wtd_analytic_pdf(times[k], w)));
  c.require(worst < 1e-6, "dense WTD max gap " + num(worst));
  return c;
}

Check a7(const AcceptanceOptions&) {
  Check c;
  const ModelParams lo = cluster(2, 1.0, 0.5, 1.1);
  const ModelParams hi = cluster(2, 1.0, 2.5, 1.1);
  const JointStats a = covariance_growth_rate(lo, 10.0 / lo.gamma);
  const JointStats b = covariance_growth_rate(hi, 10.0 / hi.gamma);
  c.require(a.growth_rate < 0.0, "rate(0.5) = " + num(a.growth_rate));
  c.require(std::abs(b.growth_rate) < 0.005, "|rate(2.5)| = " + num(std::abs(b.growth_rate)));
  c.require(a.fit_r2 > 0.99 && b.fit_r2 > 0.99, "R2 " + num(a.fit_r2, 6) + ", " + num(b.fit_r2, 6));
  return c;
}

Check a8(const AcceptanceOptions&) {
  Check c;
  const ModelParams p = chain(10, 1.0, 0.5, 0.0);
  const std::vector<int> ds = {1, 2, 3, 4, 5};
  const auto rates = covariance_rates(p, ds);
  double worst = 0.0;
  for (const auto& r : rates) worst = std::max(worst, std::abs(r.rate - rates.front().rate));
  c.require(worst < 1e-8, "rate(1) = " + num(rates.front().rate) + ", max_d|rate(d)-rate(1)| = " + num(worst));
  return c;
}

std::vector<double> rate_scan(int N, double alpha, const std::vector<double>& gammas) {
  std::vector<double> out(gammas.size());
  parallel_for(gammas.size(), [&](std::size_t i) {
    out[i] = covariance_rate(chain(N, 1.0, gammas[i], alpha), 1).rate;
  });
  return out;
}

Check a9(const AcceptanceOptions&) {
  Check c;
  const std::vector<double> g = {0.5, 0.7, 1.3, 2.0};
  const auto r = rate_scan(30, 0.0, g);
  std::string vals;
  for (std::size_t i = 0; i < g.size(); ++i) vals += (i ? ", " : "") + num(g[i], 2) + ":" + num(r[i]);
  const bool crossing = r[1] * r[2] < 0.0;
  const bool outside_same = r[0] * r[1] > 0.0 && r[2] * r[3] > 0.0;
  c.require(crossing && outside_same, "rates " + vals);
  return c;
}

Check a10(const AcceptanceOptions&) {
  Check c;
  const std::vector<double> g = {0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.4, 1.7};
  std::vector<double> peaks;
  for (int N : {10, 20, 30}) {
    const auto r = rate_scan(N, 1.1, g);
    double peak = 0.0;
    for (double x : r) peak = std::max(peak, std::abs(x));
    peaks.push_back(peak);
  }
  c.require(peaks[0] < peaks[1] && peaks[1] < peaks[2],
            "peak |rate| N=10,20,30: " + num(peaks[0], 5) + ", " + num(peaks[1], 5) + ", " + num(peaks[2], 5));
  return c;
}

Check a11(const AcceptanceOptions&) {
  Check c;
  const ModelParams p = cluster(2, 1.0, 0.5, 1.1);
  const CountDistribution d = reconstruct_pn(p, 20.0 / p.gamma, 0, {0, 1}, true);
  const QuadrantSums q = quadrant_sums(d);
  double total = 0.0;
  for (double x : connected_joint(d)) total += x;
  c.require(q.hi_lo > 0.0 && q.lo_hi > 0.0, "mixed " + num(q.hi_lo) + ", " + num(q.lo_hi));
  c.require(q.hi_hi < 0.0 && q.lo_lo < 0.0, "aligned " + num(q.hi_hi) + ", " + num(q.lo_lo));
  c.require(std::abs(total) < 1e-8, "total " + num(total));
  return c;
}

Check a12(const AcceptanceOptions& o) {
  Check c;
  std::vector<double> gammas;
  for (int k = 1; k <= 30; ++k) gammas.push_back(0.05 * k);
  const std::vector<int> ncs = {1, 2, 3};
  std::map<double, std::vector<double>> ext;
  for (double alpha : {2.0, 1.1}) {
    ModelParams base = cluster(1, 0.9, 0.5, alpha);
    const auto rows = wtd_sweep(base, gammas, ncs, 1000, o.seed + static_cast<std::uint64_t>(alpha * 10));
    for (int nc : ncs) ext[alpha].push_back(finite_mean_extent(rows, nc));
  }
  const auto& e2 = ext[2.0];
  const auto& e1 = ext[1.1];
  c.require(e2[2] <= e2[1] && e2[1] <= e2[0],
            "alpha=2 extents Nc=1,2,3: " + num(e2[0]) + ", " + num(e2[1]) + ", " + num(e2[2]));
  c.require(std::abs(e1[1] - e1[2]) <= 0.05 + 1e-9, "alpha=1.1 extents Nc=2,3: " + num(e1[1]) + ", " + num(e1[2]));
  return c;
}

double magnetization_boundary(int Nc, double alpha) {
  auto ferro = [&](double g) {
    const auto s = cmf_steady_state(cluster(Nc, 1.0, g, alpha), {}, true);
    double m = 0.0;
    for (double x : s.mx) m = std::max(m, std::abs(x));
    return m > 1e-4;
  };
  double lo = 0.02;
  double hi = 2.5;
  if (!ferro(lo)) return 0.0;
  for (int i = 0; i < 14; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ferro(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Check a13(const AcceptanceOptions&) {
  Check c;
  std::vector<double> b3(3), b11(3);
  parallel_for(6, [&](std::size_t i) {
    const int nc = static_cast<int>(i % 3) + 1;
    (i < 3 ? b3 : b11)[nc - 1] = magnetization_boundary(nc, i < 3 ? 3.0 : 1.1);
  });
  c.require(b3[0] > b3[1] && b3[1] > b3[2],
            "alpha=3 gamma_c Nc=1,2,3: " + num(b3[0], 4) + ", " + num(b3[1], 4) + ", " + num(b3[2], 4));
  c.require(std::abs(b11[1] - b11[2]) < 0.1, "alpha=1.1 gamma_c Nc=2,3: " + num(b11[1], 4) + ", " + num(b11[2], 4));
  return c;
}

Check a14(const AcceptanceOptions& o) {
  Check c;
  const int saved = thread_count();
  auto records = [&](int threads) {
    set_thread_count(threads);
    const ModelParams p = chain(3, 1.0, 0.5, 1.1);
    const Generator gen = full_generator(p);
    const auto ens = mcwf_ensemble(gen.H, gen.decay, steady_state(gen).matrix, 300, 4.0, o.seed + 14);
    std::ostringstream s;
    write_jump_records(ens.records, s);
    return s.str();
  };
  auto sweep = [&](int threads) {
    set_thread_count(threads);
    const double gs[] = {0.5, 1.5};
    const int ncs[] = {2};
    const auto rows = wtd_sweep(cluster(1, 0.9, 0.5, 1.1), gs, ncs, 1000, o.seed + 15);
    std::ostringstream s;
    write_wtd_sweep_csv(rows, s);
    return s.str();
  };
  const std::string r1 = records(1), r2 = records(3);
  const std::string w1 = sweep(1), w2 = sweep(3);
  set_thread_count(saved);
  c.require(r1 == r2 && r1 == records(saved), "jump records identical (" + std::to_string(r1.size()) + " bytes)");
  c.require(w1 == w2 && w1 == sweep(saved), "wtd sweep csv identical (" + std::to_string(w1.size()) + " bytes)");
  set_thread_count(saved);
  return c;
}

struct Entry {
  const char* id;
  const char* title;
  std::function<Check(const AcceptanceOptions&)> run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {"A1", "oracle FCS equivalence", a1},
      {"A2", "chi=0 trace recovery", a2},
      {"A3", "closed-mode equivalence", a3},
      {"A4", "decay convention pin", a4},
      {"A5", "mean-field phase boundary", a5},
      {"A6", "WTD closed form", a6},
      {"A7", "cMF covariance growth signs", a7},
      {"A8", "cumulant distance independence", a8},
      {"A9", "cumulant zero crossing", a9},
      {"A10", "cumulant size trend", a10},
      {"A11", "connected joint quadrants", a11},
      {"A12", "WTD finite-mean extent", a12},
      {"A13", "cMF magnetization boundary", a13},
      {"A14", "seeded reproducibility", a14},
  };
  return entries;
}

}  // namespace

std::vector<std::string> acceptance_ids() {
  std::vector<std::string> ids;
  for (const auto& e : registry()) ids.emplace_back(e.id);
  return ids;
}

std::string acceptance_title(const std::string& id) {
  for (const auto& e : registry()) {
    if (id == e.id) return e.title;
  }
  throw InvalidArgument("unknown acceptance criterion '" + id + "'");
}

CriterionResult run_criterion(const std::string& id, const AcceptanceOptions& options) {
  const Entry* entry = nullptr;
  for (const auto& e : registry()) {
    if (id == e.id) entry = &e;
  }
  if (entry == nullptr) throw InvalidArgument("unknown acceptance criterion '" + id + "'");
  CriterionResult r;
  r.id = entry->id;
  r.title = entry->title;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Check c = entry->run(options);
    r.pass = c.pass;
    r.detail = c.detail.str();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& ids, const AcceptanceOptions& options) {
  std::vector<CriterionResult> out;
  for (const auto& id : ids) out.push_back(run_criterion(id, options));
  return out;
}

std::string format_result(const CriterionResult& r) {
  return std::string(r.pass ? "PASS " : "FAIL ") + r.id + " " + r.title + " | " + r.detail + " (" +
         num(r.seconds, 3) + "s)";
}

}  // namespace qjump
