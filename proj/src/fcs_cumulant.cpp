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

#include "qjump/fcs_cumulant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qjump/errors.hpp"
#include "qjump/fcs_cmf.hpp"
#include "qjump/lindblad.hpp"
#include "qjump/ode.hpp"
#include "qjump/parallel.hpp"

namespace qjump {

namespace {

constexpr int kX = 0;
constexpr int kZ = 2;

constexpr double kEps[3][3][3] = {
    {{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
    {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
    {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}},
};

inline double eps(int i, int j, int k) { return kEps[i][j][k]; }

// the single g with eps(z, a, g) != 0 (resp. eps(x, a, g)), or g = -1
struct Partner {
  int g;
  double s;
};
constexpr Partner kZPartner[3] = {{1, 1.0}, {0, -1.0}, {-1, 0.0}};
constexpr Partner kXPartner[3] = {{-1, 0.0}, {2, 1.0}, {1, -1.0}};

// e^{i chi} - 1 without cancellation for small chi
inline Complex expm1_i(double chi) {
  const double s = std::sin(0.5 * chi);
  return {-2.0 * s * s, std::sin(chi)};
}

inline double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

void check_bounded(const CumulantState& s, double bound) {
  for (int k = 0; k < s.n_sites(); ++k) {
    for (int a = 0; a < 3; ++a) {
      const Complex c = s.c(k, a);
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || std::abs(c) > bound) {
        throw UnphysicalError("cumulant truncation left the physical region: |c_" + std::to_string(k) + "| = " +
                              std::to_string(std::abs(c)));
      }
    }
  }
}

}  // namespace

CumulantState::CumulantState(int n_sites) : n_(n_sites) {
  if (n_sites < 1) throw InvalidArgument("CumulantState: needs at least one site");
  data_ = ComplexVector::Zero(static_cast<std::ptrdiff_t>(size_for(n_sites)));
}

std::size_t CumulantState::size_for(int n) {
  const auto N = static_cast<std::size_t>(n);
  return 1 + 3 * N + 9 * (N * (N - 1) / 2);
}

std::size_t CumulantState::pair_index(int k, int l, int n) {
  const auto K = static_cast<std::size_t>(k);
  const auto N = static_cast<std::size_t>(n);
  return K * N - K * (K + 1) / 2 + static_cast<std::size_t>(l - k - 1);
}

std::size_t CumulantState::v_index(int k, int l, int a, int b) const {
  return 1 + 3 * static_cast<std::size_t>(n_) + 9 * pair_index(k, l, n_) + 3 * static_cast<std::size_t>(a) +
         static_cast<std::size_t>(b);
}

Complex CumulantState::v(int k, int l, int a, int b) const {
  if (k == l) throw InvalidArgument("CumulantState: no same-site second cumulant");
  return k < l ? data_[v_index(k, l, a, b)] : data_[v_index(l, k, b, a)];
}

void CumulantState::set_v(int k, int l, int a, int b, Complex value) {
  if (k == l) throw InvalidArgument("CumulantState: no same-site second cumulant");
  if (k < l) {
    data_[v_index(k, l, a, b)] = value;
  } else {
    data_[v_index(l, k, b, a)] = value;
  }
}

CumulantState product_cumulant_state(int n_sites, double cx, double cy, double cz) {
  CumulantState s(n_sites);
  for (int k = 0; k < n_sites; ++k) {
    s.c(k, 0) = cx;
    s.c(k, 1) = cy;
    s.c(k, 2) = cz;
  }
  return s;
}

CumulantState cumulants_from_density(const ComplexMatrix& rho) {
  const int n = sites_for_dim(rho.rows());
  CumulantState s(n);
  const Complex tr = rho.trace();
  if (std::abs(tr) == 0.0) throw InvalidArgument("cumulants_from_density: zero trace");
  s.log_trace() = std::log(tr);
  const PauliLabel labels[] = {PauliLabel::X, PauliLabel::Y, PauliLabel::Z};
  std::vector<ComplexMatrix> ops;
  for (int k = 0; k < n; ++k) {
    for (int a = 0; a < 3; ++a) ops.push_back(embed({k, labels[a]}, n));
  }
  for (int k = 0; k < n; ++k) {
    for (int a = 0; a < 3; ++a) s.c(k, a) = (ops[3 * k + a] * rho).trace() / tr;
  }
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          const Complex m = (ops[3 * k + a] * ops[3 * l + b] * rho).trace() / tr;
          s.set_v(k, l, a, b, m - s.c(k, a) * s.c(l, b));
        }
      }
    }
  }
  return s;
}

CumulantSystem::CumulantSystem(const ModelParams& p, bool single_site)
    : n_(p.N), h_(p.h), gamma_(p.gamma), single_site_(single_site), J_(CouplingTable(p).matrix()) {}

void CumulantSystem::rhs(const ComplexVector& y, std::span<const double> chi, ComplexVector& dy) const {
  const int N = n_;
  const auto size = static_cast<std::ptrdiff_t>(CumulantState::size_for(N));
  if (y.size() != size) throw DimensionMismatch("cumulant rhs: state size");
  if (!chi.empty() && static_cast<int>(chi.size()) != N) throw DimensionMismatch("cumulant rhs: one chi per site");
  dy.setZero(size);
  const double g = gamma_;
  const double h = h_;

  auto c = [&](int k, int a) { return y[1 + 3 * k + a]; };
  // full V(k, l, a, b) with both orders; zero on the diagonal
  std::vector<Complex> V(static_cast<std::size_t>(N) * N * 9, Complex(0.0, 0.0));
  auto Vf = [&](int k, int l, int a, int b) -> Complex& {
    return V[(static_cast<std::size_t>(k) * N + l) * 9 + 3 * a + b];
  };
  if (!single_site_) {
    for (int k = 0; k < N; ++k) {
      for (int l = k + 1; l < N; ++l) {
        const std::size_t base = 1 + 3 * static_cast<std::size_t>(N) + 9 * CumulantState::pair_index(k, l, N);
        for (int a = 0; a < 3; ++a) {
          for (int b = 0; b < 3; ++b) {
            const Complex val = y[static_cast<std::ptrdiff_t>(base + 3 * a + b)];
            Vf(k, l, a, b) = val;
            Vf(l, k, b, a) = val;
          }
        }
      }
    }
  }

  std::vector<Complex> E(static_cast<std::size_t>(N), Complex(0.0, 0.0));
  std::vector<Complex> A(static_cast<std::size_t>(N), Complex(0.0, 0.0));
  Complex S(0.0, 0.0);
  for (int j = 0; j < N; ++j) {
    E[j] = chi.empty() ? Complex(0.0, 0.0) : expm1_i(chi[j]);
    A[j] = 2.0 * g * E[j] * (c(j, kZ) + 1.0);
    S += A[j];
  }
  dy[0] = S;

  // Jc_k = sum_n J_kn c_n^x ; W[g](k, l) = sum_n J_kn V(n, l, x, g)
  std::vector<Complex> Jc(static_cast<std::size_t>(N), Complex(0.0, 0.0));
  for (int k = 0; k < N; ++k) {
    for (int n = 0; n < N; ++n) Jc[k] += J_(k, n) * c(n, kX);
  }
  std::vector<Eigen::MatrixXcd> W(3, Eigen::MatrixXcd::Zero(N, N));
  if (!single_site_) {
    Eigen::MatrixXd re(N, N);
    Eigen::MatrixXd im(N, N);
    for (int gg = 0; gg < 3; ++gg) {
      for (int n = 0; n < N; ++n) {
        for (int l = 0; l < N; ++l) {
          const Complex v = Vf(n, l, kX, gg);
          re(n, l) = v.real();
          im(n, l) = v.imag();
        }
      }
      W[gg].real() = J_ * re;
      W[gg].imag() = J_ * im;
    }
  }

  for (int k = 0; k < N; ++k) {
    const Complex ek = 1.0 + E[k];
    for (int a = 0; a < 3; ++a) {
      Complex d(0.0, 0.0);
      for (int gg = 0; gg < 3; ++gg) {
        d += -2.0 * h * eps(2, a, gg) * c(k, gg);
        const double e = eps(0, a, gg);
        if (e != 0.0) d += 4.0 * e * (W[gg](k, k) + Jc[k] * c(k, gg));
      }
      d += -2.0 * g * (ek * delta(a, kZ) * (c(k, kZ) + 1.0) + delta(a, kZ) + c(k, a));
      for (int j = 0; j < N; ++j) {
        if (j == k || E[j] == Complex(0.0, 0.0)) continue;
        d += 2.0 * g * E[j] * (Vf(k, j, a, kZ) + c(k, a) * c(j, kZ) + c(k, a));
      }
      d -= c(k, a) * S;
      dy[1 + 3 * k + a] = d;
    }
  }
  if (single_site_) return;

  for (int k = 0; k < N; ++k) {
    for (int l = k + 1; l < N; ++l) {
      const std::size_t base = 1 + 3 * static_cast<std::size_t>(N) + 9 * CumulantState::pair_index(k, l, N);
      const double Jkl = J_(k, l);
      const Complex ek = 1.0 + E[k];
      const Complex el = 1.0 + E[l];
      const Complex rest = S - A[k] - A[l];
      const Complex mk = Jc[k] - J_(l, k) * c(l, kX);
      const Complex ml = Jc[l] - J_(k, l) * c(k, kX);
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          const Complex vab = Vf(k, l, a, b);
          Complex d(0.0, 0.0);
          if (const Partner z = kZPartner[a]; z.g >= 0) d += -2.0 * h * z.s * Vf(k, l, z.g, b);
          if (const Partner z = kZPartner[b]; z.g >= 0) d += -2.0 * h * z.s * Vf(k, l, a, z.g);
          if (const Partner x = kXPartner[a]; x.g >= 0) {
            const int gg = x.g;
            d += 4.0 * x.s * (c(k, gg) * W[b](k, l) + mk * Vf(k, l, gg, b));
            d += 4.0 * Jkl * x.s * (delta(b, kX) * c(k, gg) - c(l, b) * (c(k, gg) * c(l, kX) + Vf(k, l, gg, kX)));
          }
          if (const Partner x = kXPartner[b]; x.g >= 0) {
            const int gg = x.g;
            d += 4.0 * x.s * (c(l, gg) * W[a](l, k) + ml * Vf(l, k, gg, a));
            d += 4.0 * Jkl * x.s * (delta(a, kX) * c(l, gg) - c(k, a) * (c(l, gg) * c(k, kX) + Vf(l, k, gg, kX)));
          }
          d += rest * vab;
          d += -2.0 * g * ((delta(a, kZ) * ek + 1.0) * vab + c(k, a) * E[k] * Vf(k, l, kZ, b));
          d += -2.0 * g * ((delta(b, kZ) * el + 1.0) * vab + c(l, b) * E[l] * Vf(k, l, a, kZ));
          d -= vab * S;
          dy[static_cast<std::ptrdiff_t>(base + 3 * a + b)] = d;
        }
      }
    }
  }
}

CumulantState CumulantSystem::rhs(const CumulantState& s, std::span<const double> chi) const {
  if (s.n_sites() != n_) throw DimensionMismatch("cumulant rhs: site count");
  CumulantState out(n_);
  rhs(s.data(), chi, out.data());
  return out;
}

CumulantState cumulant_rhs(const CumulantState& state, std::span<const double> chi, const ModelParams& p) {
  return CumulantSystem(p).rhs(state, chi);
}

std::vector<CumulantState> evolve_cumulants(const CumulantState& state0, std::span<const double> chi,
                                            const ModelParams& p, std::span<const double> times,
                                            const CumulantOptions& options) {
  if (state0.n_sites() != p.N) throw DimensionMismatch("evolve_cumulants: state has wrong site count");
  const CumulantSystem system(p, options.single_site);
  const std::vector<double> chi_copy(chi.begin(), chi.end());
  Rk4Options opt;
  opt.dt = options.dt;
  opt.adaptive = false;
  Rk4Integrator<ComplexVector> stepper(
      [&](double, const ComplexVector& y, ComplexVector& dy) { system.rhs(y, chi_copy, dy); }, opt);
  ComplexVector y = state0.data();
  double t = 0.0;
  std::vector<CumulantState> out;
  out.reserve(times.size());
  for (double target : times) {
    if (target < t) throw InvalidArgument("evolve_cumulants: times must be ascending");
    stepper.advance(y, t, target);
    CumulantState s(p.N);
    s.data() = y;
    check_bounded(s, options.blowup);
    out.push_back(std::move(s));
  }
  return out;
}

CumulantState cumulant_prerun(const ModelParams& p, const CumulantOptions& options) {
  validate(p);
  if (!(p.gamma > 0.0)) throw InvalidArgument("cumulant pre-run requires gamma > 0");
  const CumulantSystem system(p, options.single_site);
  CumulantState s = product_cumulant_state(p.N, options.seed_cx, 0.0, options.seed_cz);
  Rk4Options opt;
  opt.dt = 0.01;
  opt.dt_max = 0.5;
  opt.rel_tol = 1e-10;
  Rk4Integrator<ComplexVector> stepper(
      [&](double, const ComplexVector& y, ComplexVector& dy) { system.rhs(y, {}, dy); }, opt);
  ComplexVector y = s.data();
  double t = 0.0;
  const double t_end = options.prerun_gamma / p.gamma;
  const double chunk = 1.0 / p.gamma;
  while (t < t_end) {
    stepper.advance(y, t, std::min(t_end, t + chunk));
    s.data() = y;
    check_bounded(s, options.blowup);
  }
  s.log_trace() = 0.0;
  return s;
}

std::vector<CovarianceRate> covariance_rates(const ModelParams& p, std::span<const int> distances,
                                             const CumulantOptions& options) {
  validate(p);
  if (options.samples < 5) throw InvalidArgument("covariance_rates: needs at least 5 samples");
  if (!(options.delta_chi > 0.0)) throw InvalidArgument("covariance_rates: delta_chi must be > 0");
  for (int d : distances) {
    if (d < 1 || d >= p.N) throw InvalidArgument("covariance_rates: distance outside 1..N-1");
  }
  const CumulantState base = cumulant_prerun(p, options);
  const double t_f = options.t_count_gamma / p.gamma;
  std::vector<double> times(static_cast<std::size_t>(options.samples));
  for (int k = 0; k < options.samples; ++k) times[k] = 0.5 * t_f * (1.0 + static_cast<double>(k) / (options.samples - 1));

  // nodes per distance: (d1, d1), (d1, -d1), (d2, d2), (d2, -d2) with d2 = d1 / 2;
  // l(-chi) = conj l(chi) supplies the other half of the stencil
  const double steps[2] = {options.delta_chi, 0.5 * options.delta_chi};
  const std::size_t n_nodes = distances.size() * 4;
  std::vector<std::vector<CumulantState>> runs(n_nodes);
  parallel_for(n_nodes, [&](std::size_t i) {
    const int d = distances[i / 4];
    const double dl = steps[(i % 4) / 2];
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    std::vector<double> chi(static_cast<std::size_t>(p.N), 0.0);
    chi[0] = dl;
    chi[static_cast<std::size_t>(d)] = sign * dl;
    runs[i] = evolve_cumulants(base, chi, p, times, options);
  });

  std::vector<CovarianceRate> out;
  std::vector<double> gt;
  for (double t : times) gt.push_back(p.gamma * t);
  for (std::size_t di = 0; di < distances.size(); ++di) {
    CovarianceRate r;
    r.d = distances[di];
    r.gamma_t = gt;
    double rate[2] = {0.0, 0.0};
    for (int s = 0; s < 2; ++s) {
      const double dl = steps[s];
      std::vector<double> cov;
      for (std::size_t k = 0; k < times.size(); ++k) {
        const Complex lpp = runs[4 * di + 2 * s][k].log_trace();
        const Complex lpm = runs[4 * di + 2 * s + 1][k].log_trace();
        cov.push_back(-(lpp - lpm).real() / (2.0 * dl * dl));
      }
      const auto [slope, r2] = linear_fit(gt, cov);
      rate[s] = slope;
      if (s == 0) {
        r.cov = cov;
        r.fit_r2 = r2;
      }
    }
    r.rate = rate[0];
    r.rate_half = rate[1];
    const double scale = std::max(std::abs(rate[0]), std::abs(rate[1]));
    if (std::abs(rate[0] - rate[1]) > options.richardson_tol * scale + 1e-7) {
      throw StepSizeError("covariance stencil: delta and delta/2 rates disagree (" + std::to_string(rate[0]) + " vs " +
                          std::to_string(rate[1]) + ")");
    }
    out.push_back(std::move(r));
  }
  return out;
}

CovarianceRate covariance_rate(const ModelParams& p, int d, const CumulantOptions& options) {
  const int ds[] = {d};
  return covariance_rates(p, ds, options).front();
}

double mean_count_from_cgf(const ModelParams& p, const CumulantState& start, int site, double t,
                           const CumulantOptions& options) {
  if (site < 0 || site >= p.N) throw InvalidArgument("mean_count_from_cgf: site out of range");
  std::vector<double> chi(static_cast<std::size_t>(p.N), 0.0);
  chi[static_cast<std::size_t>(site)] = options.delta_chi;
  const double times[] = {t};
  const auto run = evolve_cumulants(start, chi, p, times, options);
  return (run.front().log_trace() - start.log_trace()).imag() / options.delta_chi;
}

MagnetizationResult magnetization_steady(const ModelParams& p, const CumulantOptions& options, double tol,
                                         double t_max_gamma, bool allow_unconverged) {
  validate(p);
  if (!(p.gamma > 0.0)) throw InvalidArgument("magnetization_steady requires gamma > 0");
  const CumulantSystem system(p, options.single_site);
  CumulantState s = product_cumulant_state(p.N, options.seed_cx, 0.0, options.seed_cz);
  Rk4Options opt;
  opt.dt = 0.01;
  opt.dt_max = 0.5;
  opt.rel_tol = 1e-10;
  Rk4Integrator<ComplexVector> stepper(
      [&](double, const ComplexVector& y, ComplexVector& dy) { system.rhs(y, {}, dy); }, opt);
  ComplexVector y = s.data();
  double t = 0.0;
  const double interval = 1.0 / p.gamma;
  const double t_max = t_max_gamma / p.gamma;
  MagnetizationResult out;
  while (t < t_max) {
    const ComplexVector prev = y;
    stepper.advance(y, t, t + interval);
    s.data() = y;
    check_bounded(s, options.blowup);
    out.residual = (y - prev).cwiseAbs().maxCoeff();
    if (out.residual < tol) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged && !allow_unconverged) {
    throw ConvergenceError("cumulant magnetization not converged (residual " + std::to_string(out.residual) + ")",
                           out.residual);
  }
  for (int k = 0; k < p.N; ++k) out.mx.push_back(s.c(k, kX).real());
  return out;
}

}  // namespace qjump
