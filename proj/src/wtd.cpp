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

#include "qjump/wtd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "qjump/errors.hpp"
#include "qjump/fcs_cmf.hpp"
#include "qjump/io.hpp"
#include "qjump/lindblad.hpp"
#include "qjump/parallel.hpp"
#include "qjump/trajectories.hpp"

namespace qjump {

double mx_star(double h, double J, double gamma) {
  if (!(J > 0.0)) throw InvalidArgument("mx_star: J must be > 0");
  const double m2 = (-h * h + 2.0 * h * J - gamma * gamma) / (2.0 * J * J);
  return m2 > 0.0 ? std::sqrt(m2) : 0.0;
}

WtdAnalytic make_wtd_analytic(double J, double h, double gamma) {
  WtdAnalytic w;
  w.J = J;
  w.h = h;
  w.gamma = gamma;
  w.mx_star = mx_star(h, J, gamma);
  const Complex hg(h, -gamma);
  w.Gamma = std::sqrt(4.0 * J * J * w.mx_star * w.mx_star + hg * hg);
  return w;
}

double wtd_analytic_pdf(double t, const WtdAnalytic& w) {
  if (w.mx_star <= 0.0 || t <= 0.0) return 0.0;
  const double g2 = std::norm(w.Gamma);
  if (g2 == 0.0) return 0.0;
  const double a = w.Gamma.real();
  const double b = w.Gamma.imag();
  // |sin(Gamma t)|^2 = (cosh 2bt - cos 2at) / 2, folded into the exponential
  const double s2 = 0.5 * (0.5 * (std::exp((2.0 * b - 2.0 * w.gamma) * t) + std::exp((-2.0 * b - 2.0 * w.gamma) * t)) -
                           std::exp(-2.0 * w.gamma * t) * std::cos(2.0 * a * t));
  return 16.0 * w.J * w.J * w.mx_star * w.mx_star * w.gamma * s2 / g2;
}

double wtd_analytic_cdf(double t, const WtdAnalytic& w) {
  if (w.mx_star <= 0.0 || t <= 0.0) return 0.0;
  const double g = w.gamma;
  const double a = w.Gamma.real();
  const double b = std::abs(w.Gamma.imag());
  const double pref = 16.0 * w.J * w.J * w.mx_star * w.mx_star * g / std::norm(w.Gamma);
  auto decay_integral = [t](double rate) { return rate * t < 1e-12 ? t : -std::expm1(-rate * t) / rate; };
  const double cosh_part = 0.5 * (decay_integral(2.0 * g - 2.0 * b) + decay_integral(2.0 * g + 2.0 * b));
  const Complex z(-2.0 * g, 2.0 * a);
  const double cos_part = ((std::exp(z * t) - 1.0) / z).real();
  return pref * 0.5 * (cosh_part - cos_part);
}

WtdMoments wtd_moments(const WtdAnalytic& w) {
  WtdMoments m;
  if (w.mx_star <= 0.0 || w.gamma <= 0.0) {
    m.mean = std::numeric_limits<double>::infinity();
    m.variance = std::numeric_limits<double>::infinity();
    m.divergent = true;
    return m;
  }
  const double h2 = w.h * w.h;
  const double g2 = w.gamma * w.gamma;
  const double jm2 = w.J * w.J * w.mx_star * w.mx_star;
  m.mean = (h2 + 2.0 * jm2 + g2) / (4.0 * jm2 * w.gamma);
  m.variance = (h2 * h2 + 6.0 * h2 * jm2 + 4.0 * jm2 * jm2 + 2.0 * g2 * (h2 - jm2) + g2 * g2) / (16.0 * jm2 * jm2 * g2);
  return m;
}

namespace {

struct ReplicaOut {
  std::vector<double> values;  // censored entries hold t_cens
  std::vector<char> censored;
};

double percentile(std::vector<double>& v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

WtdSummary wtd_monte_carlo(const ModelParams& p, const MeanFieldDrive& drive, std::size_t n_samples,
                           std::uint64_t seed, const ComplexMatrix& rho0, const WtdOptions& options) {
  validate(p);
  if (p.Nc > 6) throw InvalidArgument("wtd_monte_carlo: Nc must be <= 6");
  if (!(p.gamma > 0.0)) throw InvalidArgument("wtd_monte_carlo: gamma must be > 0");
  if (n_samples < 1000) throw InvalidArgument("wtd_monte_carlo: needs n_samples >= 1000");
  if (options.replicas < 1 || options.burn_in < 0) throw InvalidArgument("wtd_monte_carlo: bad replica settings");

  const ComplexMatrix H = build_monitored_hamiltonian(p, drive);
  const MonitoredCluster cluster(H, std::vector<double>(static_cast<std::size_t>(p.Nc), p.gamma), 0);
  const ComplexMatrix start = rho0.size() == 0 ? monitored_cluster_steady_state(p, drive) : rho0;
  if (start.rows() != H.rows()) throw DimensionMismatch("wtd_monte_carlo: rho0 dimension");
  const double t_cens = options.t_cens_gamma / p.gamma;

  const auto R = static_cast<std::size_t>(options.replicas);
  std::vector<ReplicaOut> outs(R);
  parallel_for(R, [&](std::size_t r) {
    const std::size_t quota = n_samples / R + (r < n_samples % R ? 1 : 0);
    Rng rng(trajectory_seed(seed, r));
    ComplexMatrix rho = start;
    for (int b = 0; b < options.burn_in; ++b) {
      if (cluster.next_click(rho, rng, t_cens).censored) rho = start;
    }
    auto& out = outs[r];
    out.values.reserve(quota);
    out.censored.reserve(quota);
    while (out.values.size() < quota) {
      const WaitOutcome w = cluster.next_click(rho, rng, t_cens);
      out.values.push_back(w.censored ? t_cens : w.wait);
      out.censored.push_back(w.censored ? 1 : 0);
      if (w.censored) rho = start;
    }
  });

  WtdSummary s;
  s.t_cens = t_cens;
  s.mx = drive.mx;
  std::vector<double> all;
  all.reserve(n_samples);
  std::size_t n_cens = 0;
  for (const auto& o : outs) {
    for (std::size_t i = 0; i < o.values.size(); ++i) {
      all.push_back(o.values[i]);
      if (o.censored[i]) {
        ++n_cens;
      } else {
        s.samples.push_back(o.values[i]);
      }
    }
  }
  const auto n = static_cast<double>(all.size());
  s.n_samples = all.size();
  s.censored_frac = static_cast<double>(n_cens) / n;
  s.divergent = s.censored_frac > options.divergence_threshold;

  double mean = 0.0;
  for (double x : all) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : all) var += (x - mean) * (x - mean);
  var /= (n - 1.0);
  s.mean = mean;
  s.variance = var;

  Rng boot(trajectory_seed(seed, 0xb0075eedULL));
  std::vector<double> means(static_cast<std::size_t>(std::max(options.bootstrap, 2)));
  for (auto& m : means) {
    double acc = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i) acc += all[boot.next() % all.size()];
    m = acc / n;
  }
  s.ci_lo = percentile(means, 0.025);
  s.ci_hi = percentile(means, 0.975);

  if (!s.samples.empty() && options.histogram_bins > 0) {
    std::vector<double> sorted = s.samples;
    const double top = std::max(percentile(sorted, 0.995), 1e-12);
    const int bins = options.histogram_bins;
    const double width = top / bins;
    std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
    for (double x : s.samples) {
      const auto k = static_cast<std::size_t>(x / width);
      if (k < counts.size()) counts[k] += 1.0;
    }
    for (int k = 0; k < bins; ++k) s.histogram.push_back({(k + 0.5) * width, counts[k] / (n * width)});
  }
  return s;
}

WtdSummary wtd_monte_carlo(const ModelParams& p, int Nc, std::size_t n_samples, std::uint64_t seed,
                           const WtdOptions& options) {
  ModelParams q = p;
  q.Nc = Nc;
  q.N = std::max(q.N, Nc);
  validate(q);
  if (Nc > 6) throw InvalidArgument("wtd_monte_carlo: Nc must be <= 6");
  const CmfSteadyState ss = cmf_steady_state(q, {}, true);
  const MeanFieldDrive drive = monitored_drive(q, ss.mx);
  return wtd_monte_carlo(q, drive, n_samples, seed, ComplexMatrix{}, options);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InvalidArgument("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("ks_statistic_two_sample: no samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

double ks_threshold_99(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

std::vector<WtdSweepRow> wtd_sweep(const ModelParams& base, std::span<const double> gammas,
                                   std::span<const int> nc_list, std::size_t n_samples, std::uint64_t seed,
                                   const WtdOptions& options) {
  std::vector<WtdSweepRow> rows;
  std::uint64_t index = 0;
  for (int nc : nc_list) {
    for (double g : gammas) {
      WtdSweepRow row;
      row.alpha = base.alpha;
      row.h_over_J = base.h / base.J;
      row.gamma_over_J = g / base.J;
      row.Nc = nc;
      ModelParams p = base;
      p.gamma = g;
      try {
        const WtdSummary s = wtd_monte_carlo(p, nc, n_samples, trajectory_seed(seed, index), options);
        row.censored_frac = s.censored_frac;
        row.divergent = s.divergent;
        if (!s.divergent) {
          row.inv_mean = 1.0 / (g * s.mean);
          row.inv_var = 1.0 / (g * g * s.variance);
          row.ci_lo = 1.0 / (g * s.ci_hi);
          row.ci_hi = 1.0 / (g * s.ci_lo);
        }
      } catch (const Error& e) {
        row.status = std::string(error_code_name(e.code())) + ": " + e.what();
      }
      rows.push_back(std::move(row));
      ++index;
    }
  }
  return rows;
}

double finite_mean_extent(std::span<const WtdSweepRow> rows, int Nc) {
  std::vector<const WtdSweepRow*> sel;
  for (const auto& r : rows) {
    if (r.Nc == Nc) sel.push_back(&r);
  }
  std::sort(sel.begin(), sel.end(), [](const auto* a, const auto* b) { return a->gamma_over_J < b->gamma_over_J; });
  double extent = 0.0;
  for (const auto* r : sel) {
    if (r->status != "ok" || r->divergent || !(r->inv_mean > 0.0)) break;
    extent = r->gamma_over_J;
  }
  return extent;
}

void write_wtd_sweep_csv(std::span<const WtdSweepRow> rows, std::ostream& out) {
  out << "alpha,h_over_J,gamma_over_J,Nc,inv_mean,inv_var,ci_lo,ci_hi,censored_frac,divergent,status\n";
  for (const auto& r : rows) {
    out << format_double(r.alpha) << ',' << format_double(r.h_over_J) << ',' << format_double(r.gamma_over_J) << ','
        << r.Nc << ',' << format_double(r.inv_mean) << ',' << format_double(r.inv_var) << ','
        << format_double(r.ci_lo) << ',' << format_double(r.ci_hi) << ',' << format_double(r.censored_frac) << ','
        << (r.divergent ? 1 : 0) << ',' << csv_field(r.status) << '\n';
  }
}

void write_histogram_csv(std::span<const HistogramBin> bins, std::ostream& out) {
  out << "t_bin,density\n";
  for (const auto& b : bins) out << format_double(b.t_bin) << ',' << format_double(b.density) << '\n';
}

}  // namespace qjump
