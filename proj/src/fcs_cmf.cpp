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

#include "qjump/fcs_cmf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <Eigen/Eigenvalues>

#include "qjump/dense_oracle.hpp"
#include "qjump/errors.hpp"
#include "qjump/parallel.hpp"

namespace qjump {

namespace {

constexpr double kTailMass = 1e-9;

Generator base_generator(const ComplexMatrix& H, double gamma) { return make_generator(H, gamma); }

void set_node_weights(Generator& g, std::span<const double> chi) {
  for (std::size_t i = 0; i < chi.size(); ++i) g.jump_weight[i] = g.decay[i] * std::polar(1.0, chi[i]);
}

ComplexMatrix initial_state(const ModelParams& p, const CmfStart& start, const CmfOptions& options) {
  const auto dim = std::ptrdiff_t{1} << p.Nc;
  switch (start.kind) {
    case CmfStartKind::Stationary:
      return cmf_steady_state(p, options).rho;
    case CmfStartKind::Product:
      return product_state(p.Nc, start.bx, start.by, start.bz);
    case CmfStartKind::Explicit:
      if (start.rho.rows() != dim || start.rho.cols() != dim) {
        throw DimensionMismatch("cMF start state must be 2^Nc dimensional");
      }
      return start.rho;
  }
  throw InvalidArgument("unknown cMF start kind");
}

void check_times(std::span<const double> times) {
  if (times.empty()) throw InvalidArgument("cMF counting: no sample times");
  double prev = 0.0;
  for (double t : times) {
    if (!(t >= prev)) throw InvalidArgument("cMF counting: times must be ascending and >= 0");
    prev = t;
  }
}

// Reference-cluster RK4 on fixed steps with every stage Hamiltonian recorded,
// so tilted clusters can replay the exact same schedule.
struct Schedule {
  std::vector<double> h;
  std::vector<ComplexMatrix> stage_H;        // 4 per step
  std::vector<std::size_t> sample_after;     // steps completed at each sample time
  ComplexMatrix rho_end;
};

Schedule build_schedule(const CmfHamiltonian& Hc, double gamma, const ComplexMatrix& rho0,
                        std::span<const double> times, double dt) {
  Schedule s;
  LindbladKernel kernel(base_generator(Hc(rho0), gamma));
  ComplexMatrix y = rho0, k1, k2, k3, k4, tmp;
  auto stage = [&](const ComplexMatrix& x, ComplexMatrix& k) {
    ComplexMatrix H = Hc(x);
    kernel.set_hamiltonian(H);
    k.resize(x.rows(), x.cols());
    kernel.apply(x, k);
    s.stage_H.push_back(std::move(H));
  };
  double t = 0.0;
  for (double target : times) {
    const double span = target - t;
    const auto n = static_cast<std::size_t>(span > 0.0 ? std::ceil(span / dt - 1e-9) : 0.0);
    const double h = n > 0 ? span / static_cast<double>(n) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      stage(y, k1);
      tmp = y + (0.5 * h) * k1;
      stage(tmp, k2);
      tmp = y + (0.5 * h) * k2;
      stage(tmp, k3);
      tmp = y + h * k3;
      stage(tmp, k4);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      s.h.push_back(h);
    }
    t = target;
    s.sample_after.push_back(s.h.size());
  }
  s.rho_end = y;
  return s;
}

Schedule converged_schedule(const CmfHamiltonian& Hc, double gamma, const ComplexMatrix& rho0,
                            std::span<const double> times, const CmfOptions& options) {
  double dt = options.dt;
  Schedule coarse = build_schedule(Hc, gamma, rho0, times, dt);
  for (int i = 0; i < 20; ++i) {
    dt *= 0.5;
    Schedule fine = build_schedule(Hc, gamma, rho0, times, dt);
    const double err = (fine.rho_end - coarse.rho_end).cwiseAbs().maxCoeff() / 15.0;
    if (err < options.transient_tol) return fine;
    coarse = std::move(fine);
  }
  throw StepSizeError("cMF schedule: no convergence after 20 step halvings");
}

std::vector<Complex> replay_schedule(const Schedule& s, const Generator& tilted, const ComplexMatrix& rho0) {
  LindbladKernel kernel(tilted);
  ComplexMatrix y = rho0, k1(y.rows(), y.cols()), k2 = k1, k3 = k1, k4 = k1, tmp;
  std::vector<Complex> out;
  out.reserve(s.sample_after.size());
  std::size_t next_sample = 0;
  double lognorm = 0.0;
  auto emit = [&](std::size_t done) {
    while (next_sample < s.sample_after.size() && s.sample_after[next_sample] == done) {
      out.push_back(y.trace() * std::exp(lognorm));
      ++next_sample;
    }
  };
  emit(0);
  for (std::size_t i = 0; i < s.h.size(); ++i) {
    const double h = s.h[i];
    kernel.set_hamiltonian(s.stage_H[4 * i]);
    kernel.apply(y, k1);
    tmp = y + (0.5 * h) * k1;
    kernel.set_hamiltonian(s.stage_H[4 * i + 1]);
    kernel.apply(tmp, k2);
    tmp = y + (0.5 * h) * k2;
    kernel.set_hamiltonian(s.stage_H[4 * i + 2]);
    kernel.apply(tmp, k3);
    tmp = y + h * k3;
    kernel.set_hamiltonian(s.stage_H[4 * i + 3]);
    kernel.apply(tmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double tr = std::abs(y.trace());
    if (tr < 1e-100 && tr > 0.0) {
      y /= tr;
      lognorm += std::log(tr);
    }
    emit(i + 1);
  }
  return out;
}

std::vector<Complex> constant_generator_traces(const Generator& tilted, const ComplexMatrix& rho0,
                                               std::span<const double> times) {
  std::vector<Complex> out;
  out.reserve(times.size());
  const std::ptrdiff_t d = rho0.rows();
  if (d <= 8) {
    const ComplexMatrix S = LindbladKernel(tilted).superoperator();
    ComplexVector v = vectorize(rho0);
    std::map<double, ComplexMatrix> cache;
    double t = 0.0;
    for (double target : times) {
      const double span = target - t;
      if (span > 0.0) {
        auto it = cache.find(span);
        if (it == cache.end()) it = cache.emplace(span, propagator(S, span)).first;
        v = it->second * v;
      }
      t = target;
      Complex tr(0.0, 0.0);
      for (std::ptrdiff_t a = 0; a < d; ++a) tr += v[a * d + a];
      out.push_back(tr);
    }
    return out;
  }
  DensityMatrix rho{rho0, 0.0};
  double t = 0.0;
  for (double target : times) {
    rho = integrate(rho, tilted, target - t);
    t = target;
    out.push_back(rho.trace() * std::exp(rho.lognorm));
  }
  return out;
}

void check_tail(const CountDistribution& dist) {
  const int M = dist.grid_size;
  const int edge = M - M / 8;
  double tail = 0.0;
  if (dist.rank == 1) {
    for (int n = edge; n < M; ++n) tail += dist.p(n);
  } else {
    for (int a = 0; a < M; ++a) {
      for (int b = 0; b < M; ++b) {
        if (a >= edge || b >= edge) tail += dist.p(a, b);
      }
    }
  }
  if (tail > kTailMass) {
    throw AliasingError("cMF reconstruction: " + std::to_string(tail) + " of the mass sits in the top eighth of the M=" +
                        std::to_string(M) + " grid");
  }
}

int next_pow2(double x) {
  int M = 1;
  while (M < x) M *= 2;
  return M;
}

int default_joint_grid(const ModelParams& p, const ComplexMatrix& rho0, std::span<const int> sites, double t) {
  double mu = 0.0;
  for (int s : sites) mu = std::max(mu, p.gamma * excited_weight(rho0, s) * t);
  return std::max(128, next_pow2(2.0 * (mu + 10.0 * std::sqrt(mu) + 20.0)));
}

std::vector<std::size_t> half_nodes_2d(int M) {
  const auto m = static_cast<std::size_t>(M);
  std::vector<std::size_t> nodes;
  for (std::size_t q = 0; q < m * m; ++q) {
    const std::size_t partner = ((m - q / m) % m) * m + (m - q % m) % m;
    if (q <= partner) nodes.push_back(q);
  }
  return nodes;
}

std::vector<CountDistribution> joint_distributions(const ModelParams& p, const CmfStart& start,
                                                   const CmfOptions& options, int site1, int site2, int M,
                                                   std::span<const double> times) {
  const auto m = static_cast<std::size_t>(M);
  const auto chi = chi_grid(M);
  const auto flat = half_nodes_2d(M);
  std::vector<std::vector<double>> nodes;
  nodes.reserve(flat.size());
  for (std::size_t q : flat) {
    std::vector<double> c(static_cast<std::size_t>(p.Nc), 0.0);
    c[static_cast<std::size_t>(site1)] = chi[q / m];
    c[static_cast<std::size_t>(site2)] = chi[q % m];
    nodes.push_back(std::move(c));
  }
  const auto traces = cmf_counting_traces(p, start, nodes, times, options);
  std::vector<CountDistribution> out;
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    ComplexMatrix surface(M, M);
    for (std::size_t i = 0; i < flat.size(); ++i) {
      const std::size_t q = flat[i];
      const std::size_t partner = ((m - q / m) % m) * m + (m - q % m) % m;
      surface(static_cast<std::ptrdiff_t>(q / m), static_cast<std::ptrdiff_t>(q % m)) = traces[i][ti];
      surface(static_cast<std::ptrdiff_t>(partner / m), static_cast<std::ptrdiff_t>(partner % m)) =
          std::conj(traces[i][ti]);
    }
    auto dist = invert_counting_2d(surface, times[ti], {site1, site2});
    check_tail(dist);
    out.push_back(std::move(dist));
  }
  return out;
}

}  // namespace

CmfHamiltonian::CmfHamiltonian(const ModelParams& p)
    : nc_(p.Nc), J_(p.J), G_(drive_matrix(p)), static_(build_cluster_static_hamiltonian(p)) {
  if (p.Nc > 6) throw DimensionMismatch("cMF cluster larger than 6 sites");
  for (int i = 0; i < nc_; ++i) sx_.push_back(embed({i, PauliLabel::X}, nc_));
  constant_ = (G_.array() == 0.0).all();
}

std::vector<double> CmfHamiltonian::magnetization(const ComplexMatrix& rho) const {
  std::vector<double> m(static_cast<std::size_t>(nc_));
  for (int i = 0; i < nc_; ++i) m[i] = site_expectation(rho, i, PauliLabel::X).real();
  return m;
}

ComplexMatrix CmfHamiltonian::from_mx(std::span<const double> mx) const {
  if (static_cast<int>(mx.size()) != nc_) throw DimensionMismatch("CmfHamiltonian: mx must have Nc entries");
  ComplexMatrix H = static_;
  for (int i = 0; i < nc_; ++i) {
    double g = 0.0;
    for (int j = 0; j < nc_; ++j) g += G_(i, j) * mx[j];
    if (g != 0.0) H -= (2.0 * J_ * g) * sx_[i];
  }
  return H;
}

ComplexMatrix cmf_rhs(const CmfHamiltonian& H, double gamma, const ComplexMatrix& rho) {
  const LindbladKernel kernel(base_generator(H(rho), gamma));
  return kernel.apply(rho);
}

ComplexMatrix cmf_evolve(const ModelParams& p, const ComplexMatrix& rho0, double t, const Rk4Options& options) {
  const CmfHamiltonian Hc(p);
  if (rho0.rows() != (std::ptrdiff_t{1} << p.Nc)) throw DimensionMismatch("cmf_evolve: state dimension");
  LindbladKernel kernel(base_generator(Hc(rho0), p.gamma));
  Rk4Integrator<ComplexMatrix> stepper(
      [&](double, const ComplexMatrix& y, ComplexMatrix& dy) {
        kernel.set_hamiltonian(Hc(y));
        dy.resize(y.rows(), y.cols());
        kernel.apply(y, dy);
      },
      options);
  ComplexMatrix y = rho0;
  double now = 0.0;
  stepper.advance(y, now, t);
  return y;
}

CmfSteadyState cmf_steady_state(const ModelParams& p, const CmfOptions& options, bool allow_unconverged) {
  validate(p);
  if (!(p.gamma > 0.0)) throw InvalidArgument("cmf_steady_state: requires gamma > 0");
  const CmfHamiltonian Hc(p);
  ComplexMatrix y = product_state(p.Nc, options.seed_bx, options.seed_by, options.seed_bz);
  LindbladKernel kernel(base_generator(Hc(y), p.gamma));
  Rk4Options opt;
  opt.dt = 0.01;
  opt.dt_max = 0.25;
  opt.rel_tol = 1e-11;
  Rk4Integrator<ComplexMatrix> stepper(
      [&](double, const ComplexMatrix& x, ComplexMatrix& dx) {
        kernel.set_hamiltonian(Hc(x));
        dx.resize(x.rows(), x.cols());
        kernel.apply(x, dx);
      },
      opt);
  const double interval = 1.0 / p.gamma;
  const double t_max = options.t_max_gamma / p.gamma;
  CmfSteadyState out;
  double t = 0.0;
  while (t < t_max) {
    ComplexMatrix prev = y;
    stepper.advance(y, t, t + interval);
    out.residual = frobenius_norm(y - prev);
    if (out.residual < options.steady_tol) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged && !allow_unconverged) {
    throw ConvergenceError("cMF steady state not reached by gamma t = " + std::to_string(options.t_max_gamma) +
                               " (residual " + std::to_string(out.residual) + ")",
                           out.residual);
  }
  y = 0.5 * (y + y.adjoint()).eval();
  y /= y.trace().real();
  out.rho = y;
  out.mx = Hc.magnetization(y);
  out.t = t;
  return out;
}

TiltedPairState make_pair_state(const ComplexMatrix& rho0, std::vector<double> chi) {
  const int n = sites_for_dim(rho0.rows());
  if (static_cast<int>(chi.size()) != n) throw DimensionMismatch("make_pair_state: one chi per cluster site");
  return TiltedPairState{DensityMatrix{rho0, 0.0}, DensityMatrix{rho0, 0.0}, CountingField{std::move(chi)}};
}

TiltedPairState evolve_pair(const TiltedPairState& state, const ModelParams& p, double dt,
                            const Rk4Options& options) {
  const CmfHamiltonian Hc(p);
  const std::ptrdiff_t d = std::ptrdiff_t{1} << p.Nc;
  if (state.rho_mf.matrix.rows() != d || state.rho_tilted.matrix.rows() != d) {
    throw DimensionMismatch("evolve_pair: states must be 2^Nc dimensional");
  }
  Generator gen = base_generator(Hc(state.rho_mf.matrix), p.gamma);
  LindbladKernel mf(gen);
  set_node_weights(gen, state.chi.chi);
  LindbladKernel tilted(gen);
  // stacked [rho_tilted | rho_mf]
  ComplexMatrix y(d, 2 * d);
  y.leftCols(d) = state.rho_tilted.matrix;
  y.rightCols(d) = state.rho_mf.matrix;
  Rk4Integrator<ComplexMatrix> stepper(
      [&](double, const ComplexMatrix& x, ComplexMatrix& dx) {
        const ComplexMatrix ref = x.rightCols(d);
        const ComplexMatrix H = Hc(ref);
        mf.set_hamiltonian(H);
        tilted.set_hamiltonian(H);
        dx.resize(d, 2 * d);
        dx.leftCols(d) = tilted.apply(ComplexMatrix(x.leftCols(d)));
        dx.rightCols(d) = mf.apply(ref);
      },
      options);
  double t = 0.0;
  stepper.advance(y, t, dt);
  TiltedPairState out = state;
  out.rho_tilted.matrix = y.leftCols(d);
  out.rho_mf.matrix = y.rightCols(d);
  const double tr = std::abs(out.rho_tilted.matrix.trace());
  if (tr < 1e-100 && tr > 0.0) {
    out.rho_tilted.matrix /= tr;
    out.rho_tilted.lognorm += std::log(tr);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
      Eigen::MatrixXcd(0.5 * (out.rho_mf.matrix + out.rho_mf.matrix.adjoint())), Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < -1e-6) {
    throw UnphysicalError("evolve_pair: reference cluster lost positivity (eigenvalue " + std::to_string(min_eig) +
                          ")");
  }
  return out;
}

std::vector<std::vector<Complex>> cmf_counting_traces(const ModelParams& p, const CmfStart& start,
                                                      const std::vector<std::vector<double>>& nodes,
                                                      std::span<const double> times, const CmfOptions& options) {
  validate(p);
  check_times(times);
  for (const auto& c : nodes) {
    if (static_cast<int>(c.size()) != p.Nc) throw DimensionMismatch("cMF counting: one chi per cluster site");
  }
  const CmfHamiltonian Hc(p);
  const ComplexMatrix rho0 = initial_state(p, start, options);
  std::vector<std::vector<Complex>> out(nodes.size());
  if (start.kind == CmfStartKind::Stationary || Hc.is_constant()) {
    const Generator gen = base_generator(Hc(rho0), p.gamma);
    parallel_for(nodes.size(), [&](std::size_t i) {
      Generator g = gen;
      set_node_weights(g, nodes[i]);
      out[i] = constant_generator_traces(g, rho0, times);
    });
    return out;
  }
  const Schedule schedule = converged_schedule(Hc, p.gamma, rho0, times, options);
  const Generator gen = base_generator(Hc(rho0), p.gamma);
  parallel_for(nodes.size(), [&](std::size_t i) {
    Generator g = gen;
    set_node_weights(g, nodes[i]);
    out[i] = replay_schedule(schedule, g, rho0);
  });
  return out;
}

CountDistribution reconstruct_pn(const ModelParams& p, double t_final, int M, std::vector<int> counted_sites,
                                 bool joint, const CmfStart& start, const CmfOptions& options) {
  validate(p);
  if (counted_sites.empty()) throw InvalidArgument("reconstruct_pn: no counted sites");
  for (int s : counted_sites) {
    if (s < 0 || s >= p.Nc) throw InvalidArgument("reconstruct_pn: counted site outside the cluster");
  }
  if (!(t_final > 0.0)) throw InvalidArgument("reconstruct_pn: t_final must be > 0");
  if (M != 0 && !is_power_of_two(M)) throw InvalidArgument("reconstruct_pn: M must be a power of two");
  const double times[] = {t_final};
  if (joint) {
    if (counted_sites.size() != 2 || counted_sites[0] == counted_sites[1]) {
      throw InvalidArgument("reconstruct_pn: a joint distribution needs two distinct sites");
    }
    if (M == 0) M = default_joint_grid(p, initial_state(p, start, options), counted_sites, t_final);
    return joint_distributions(p, start, options, counted_sites[0], counted_sites[1], M, times).front();
  }
  if (M == 0) M = required_grid_size(p.gamma, t_final, static_cast<int>(counted_sites.size()));
  const auto chi = chi_grid(M);
  std::vector<std::vector<double>> nodes;
  for (int k = 0; k <= M / 2; ++k) {
    std::vector<double> c(static_cast<std::size_t>(p.Nc), 0.0);
    for (int s : counted_sites) c[static_cast<std::size_t>(s)] = chi[k];
    nodes.push_back(std::move(c));
  }
  const auto traces = cmf_counting_traces(p, start, nodes, times, options);
  std::vector<Complex> line(static_cast<std::size_t>(M));
  for (int k = 0; k <= M / 2; ++k) line[k] = traces[k][0];
  for (int k = M / 2 + 1; k < M; ++k) line[k] = std::conj(line[M - k]);
  auto dist = invert_counting_1d(line, t_final, std::move(counted_sites));
  check_tail(dist);
  return dist;
}

std::pair<int, int> central_pair(int Nc) {
  if (Nc < 2) throw InvalidArgument("central_pair: needs Nc >= 2");
  return {Nc / 2 - 1, Nc / 2};
}

JointStats joint_stats(const CountDistribution& joint) {
  JointStats s;
  s.cov = joint.covariance();
  s.cov_centered = joint.covariance_centered();
  s.mean1 = joint.mean(0);
  s.mean2 = joint.mean(1);
  s.var1 = joint.variance(0);
  s.var2 = joint.variance(1);
  s.grid_size = joint.grid_size;
  return s;
}

std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("linear_fit: need >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("linear_fit: degenerate abscissae");
  const double slope = sxy / sxx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    ss_res += r * r;
  }
  const double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return {slope, r2};
}

JointStats covariance_growth_rate(const ModelParams& p, double t_final, int n_samples, int M,
                                  const CmfStart& start, const CmfOptions& options) {
  validate(p);
  if (n_samples < 5) throw InvalidArgument("covariance_growth_rate: needs at least 5 sample times");
  if (!(t_final > 0.0)) throw InvalidArgument("covariance_growth_rate: t_final must be > 0");
  const auto [s1, s2] = central_pair(p.Nc);
  std::vector<double> times(static_cast<std::size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k) times[k] = 0.5 * t_final * (1.0 + static_cast<double>(k) / (n_samples - 1));
  if (M == 0) {
    const ComplexMatrix rho0 = initial_state(p, start, options);
    const int sites[] = {s1, s2};
    M = default_joint_grid(p, rho0, sites, t_final);
  }
  const auto dists = joint_distributions(p, start, options, s1, s2, M, times);
  JointStats stats = joint_stats(dists.back());
  std::vector<double> gt;
  for (std::size_t k = 0; k < dists.size(); ++k) {
    stats.times.push_back(times[k]);
    stats.covs.push_back(dists[k].covariance());
    gt.push_back(p.gamma * times[k]);
  }
  const auto [slope, r2] = linear_fit(gt, stats.covs);
  stats.growth_rate = slope;
  stats.fit_r2 = r2;
  stats.stationary = r2 >= 0.99;
  return stats;
}

}  // namespace qjump
