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

#include "qjump/dense_oracle.hpp"

#include <cmath>
#include <string>

#include "qjump/errors.hpp"
#include "qjump/parallel.hpp"

namespace qjump {

namespace {

constexpr double kRescaleBelow = 1e-100;

void require_square_state(const ComplexMatrix& rho, const Generator& gen) {
  if (rho.rows() != gen.H.rows() || rho.cols() != gen.H.cols()) {
    throw DimensionMismatch("state dimension " + std::to_string(rho.rows()) + " does not match generator " +
                            std::to_string(gen.H.rows()));
  }
}

Generator with_counting(const Generator& gen, std::span<const int> sites, double chi) {
  Generator g = gen;
  for (int s : sites) {
    if (s < 0 || s >= g.n_sites()) throw InvalidArgument("counted site " + std::to_string(s) + " out of range");
    g.jump_weight[static_cast<std::size_t>(s)] = g.decay[static_cast<std::size_t>(s)] * std::polar(1.0, chi);
  }
  return g;
}

Complex tilted_trace(const Generator& gen, const ComplexMatrix& rho0, double t_final) {
  DensityMatrix rho{rho0, 0.0};
  rho = integrate(rho, gen, t_final);
  return rho.trace() * std::exp(rho.lognorm);
}

}  // namespace

Generator full_generator(const ModelParams& p, std::span<const double> chi) {
  return make_generator(build_full_hamiltonian(p), p.gamma, chi);
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ModelParams& p, std::span<const double> chi) {
  const LindbladKernel kernel(full_generator(p, chi));
  if (rho.rows() != kernel.dim()) throw DimensionMismatch("lindblad_rhs: state dimension mismatch");
  return kernel.apply(rho);
}

DensityMatrix integrate(const DensityMatrix& rho0, const Generator& gen, double t_final,
                        const Rk4Options& options) {
  require_square_state(rho0.matrix, gen);
  if (!(t_final >= 0.0)) throw InvalidArgument("integrate: t_final must be >= 0");
  const LindbladKernel kernel(gen);
  Rk4Integrator<ComplexMatrix> stepper(
      [&kernel](double, const ComplexMatrix& y, ComplexMatrix& dy) {
        dy.resize(y.rows(), y.cols());
        kernel.apply(y, dy);
      },
      options);
  DensityMatrix rho = rho0;
  double t = 0.0;
  // segment length bounded so decaying traces are rescaled long before underflow
  double rate = 0.0;
  for (double g : gen.decay) rate += 4.0 * g;
  const double segment = rate > 0.0 ? std::max(1.0, 50.0 / rate) : t_final;
  while (t < t_final) {
    const double target = std::min(t_final, t + segment);
    stepper.advance(rho.matrix, t, target);
    const double tr = std::abs(rho.matrix.trace());
    if (tr < kRescaleBelow && tr > 0.0) {
      rho.matrix /= tr;
      rho.lognorm += std::log(tr);
    }
  }
  return rho;
}

DensityMatrix integrate(const DensityMatrix& rho0, const ModelParams& p, std::span<const double> chi,
                        double t_final, const Rk4Options& options) {
  return integrate(rho0, full_generator(p, chi), t_final, options);
}

DensityMatrix steady_state(const Generator& gen, const SteadyStateOptions& options) {
  double gamma = 0.0;
  for (double g : gen.decay) gamma = std::max(gamma, g);
  if (!(gamma > 0.0)) throw InvalidArgument("steady_state: requires gamma > 0");
  const int n = gen.n_sites();
  const double dt = options.interval_gamma / gamma;
  const double t_max = options.t_max_gamma / gamma;
  const std::ptrdiff_t d = gen.H.rows();

  ComplexMatrix rho = product_state(n, options.seed_bx, 0.0, options.seed_bz);
  double residual = 0.0;
  double t = 0.0;
  if (d <= 16) {
    const ComplexMatrix P = propagator(LindbladKernel(gen).superoperator(), dt);
    ComplexVector v = vectorize(rho);
    while (t < t_max) {
      ComplexVector next = P * v;
      residual = (next - v).norm();
      v = next;
      t += dt;
      if (residual < options.tol) break;
    }
    rho = unvectorize(v, d);
  } else {
    // one persistent stepper; tight control keeps the step noise below tol
    const LindbladKernel kernel(gen);
    Rk4Options opt;
    opt.rel_tol = 1e-12;
    opt.dt_max = 0.25;
    Rk4Integrator<ComplexMatrix> stepper(
        [&](double, const ComplexMatrix& x, ComplexMatrix& dx) {
          dx.resize(x.rows(), x.cols());
          kernel.apply(x, dx);
        },
        opt);
    while (t < t_max) {
      const ComplexMatrix prev = rho;
      stepper.advance(rho, t, t + dt);
      residual = frobenius_norm(rho - prev);
      if (residual < options.tol) break;
    }
  }
  if (!(residual < options.tol)) {
    throw ConvergenceError("steady_state: no convergence by t=" + std::to_string(t_max) +
                               " (residual " + std::to_string(residual) + ")",
                           residual);
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return DensityMatrix{rho, 0.0};
}

DensityMatrix steady_state(const ModelParams& p, const SteadyStateOptions& options) {
  return steady_state(full_generator(p), options);
}

std::vector<Complex> counting_traces(const Generator& untilted, const ComplexMatrix& rho0,
                                     std::span<const int> counted_sites, double t_final, int M) {
  require_square_state(rho0, untilted);
  if (!is_power_of_two(M)) throw InvalidArgument("grid size must be a power of two");
  const auto chi = chi_grid(M);
  std::vector<Complex> traces(static_cast<std::size_t>(M));
  // T(-chi) = conj T(chi)
  const std::size_t half = static_cast<std::size_t>(M / 2) + 1;
  parallel_for(half, [&](std::size_t k) {
    traces[k] = tilted_trace(with_counting(untilted, counted_sites, chi[k]), rho0, t_final);
  });
  for (int k = M / 2 + 1; k < M; ++k) traces[k] = std::conj(traces[M - k]);
  return traces;
}

CountDistribution fcs_dense(const Generator& gen, const ComplexMatrix& rho0, double t_final, int M,
                            std::vector<int> counted_sites) {
  if (counted_sites.empty()) throw InvalidArgument("fcs_dense: no counted sites");
  double rate = 0.0;
  for (int s : counted_sites) rate = std::max(rate, gen.decay.at(static_cast<std::size_t>(s)));
  const int required = required_grid_size(rate, t_final, static_cast<int>(counted_sites.size()));
  if (M < required) {
    throw InvalidArgument("fcs_dense: grid size " + std::to_string(M) + " below the jump-rate bound " +
                          std::to_string(required));
  }
  const auto traces = counting_traces(gen, rho0, counted_sites, t_final, M);
  return invert_counting_1d(traces, t_final, std::move(counted_sites));
}

CountDistribution fcs_dense(const ModelParams& p, double t_final, int M, std::vector<int> counted_sites,
                            const ComplexMatrix& rho0) {
  const Generator gen = full_generator(p);
  const ComplexMatrix start = rho0.size() == 0 ? steady_state(gen).matrix : rho0;
  return fcs_dense(gen, start, t_final, M, std::move(counted_sites));
}

CountDistribution fcs_dense_joint(const Generator& gen, const ComplexMatrix& rho0, double t_final, int M,
                                  int site1, int site2) {
  require_square_state(rho0, gen);
  if (site1 == site2) throw InvalidArgument("fcs_dense_joint: sites must differ");
  if (!is_power_of_two(M)) throw InvalidArgument("grid size must be a power of two");
  const auto chi = chi_grid(M);
  const std::size_t m = static_cast<std::size_t>(M);
  ComplexMatrix traces(M, M);
  std::vector<std::size_t> nodes;
  for (std::size_t q = 0; q < m * m; ++q) {
    const std::size_t partner = ((m - q / m) % m) * m + (m - q % m) % m;
    if (q <= partner) nodes.push_back(q);
  }
  std::vector<Complex> values(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    const std::size_t q = nodes[i];
    Generator g = with_counting(gen, std::span<const int>(&site1, 1), chi[q / m]);
    g = with_counting(g, std::span<const int>(&site2, 1), chi[q % m]);
    values[i] = tilted_trace(g, rho0, t_final);
  });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::size_t q = nodes[i];
    const std::size_t partner = ((m - q / m) % m) * m + (m - q % m) % m;
    traces(static_cast<std::ptrdiff_t>(q / m), static_cast<std::ptrdiff_t>(q % m)) = values[i];
    traces(static_cast<std::ptrdiff_t>(partner / m), static_cast<std::ptrdiff_t>(partner % m)) = std::conj(values[i]);
  }
  return invert_counting_2d(traces, t_final, {site1, site2});
}

std::vector<double> wtd_dense(const Generator& gen, const ComplexMatrix& rho_ss, int site,
                              std::span<const double> times) {
  require_square_state(rho_ss, gen);
  if (site < 0 || site >= gen.n_sites()) throw InvalidArgument("wtd_dense: site out of range");
  const double gamma = gen.decay[static_cast<std::size_t>(site)];
  ComplexMatrix kicked = gamma * apply_jump(rho_ss, site);
  const double norm = kicked.trace().real();
  if (!(norm >= 1e-14)) {
    throw UndefinedWtdError("wtd_dense: Tr[L_j rho] = " + std::to_string(norm) + " (dark steady state)");
  }
  kicked /= norm;
  Generator no_click = gen;
  no_click.jump_weight[static_cast<std::size_t>(site)] = Complex(0.0, 0.0);
  const LindbladKernel kernel(no_click);
  Rk4Options opt;
  opt.rel_tol = 1e-11;
  opt.dt = 1e-3;
  Rk4Integrator<ComplexMatrix> stepper(
      [&kernel](double, const ComplexMatrix& y, ComplexMatrix& dy) {
        dy.resize(y.rows(), y.cols());
        kernel.apply(y, dy);
      },
      opt);
  std::vector<double> w;
  w.reserve(times.size());
  double t = 0.0;
  for (double target : times) {
    if (target < t) throw InvalidArgument("wtd_dense: times must be ascending and >= 0");
    stepper.advance(kicked, t, target);
    w.push_back(gamma * excited_weight(kicked, site));
  }
  return w;
}

std::vector<double> wtd_dense(const ModelParams& p, int site, std::span<const double> times) {
  const Generator gen = full_generator(p);
  return wtd_dense(gen, steady_state(gen).matrix, site, times);
}

std::vector<double> log_time_grid(double t_min, double t_max, int n) {
  if (!(t_min > 0.0) || !(t_max > t_min) || n < 2) throw InvalidArgument("log_time_grid: bad range");
  std::vector<double> t(static_cast<std::size_t>(n));
  const double step = std::log(t_max / t_min) / (n - 1);
  for (int i = 0; i < n; ++i) t[i] = t_min * std::exp(step * i);
  t.back() = t_max;
  return t;
}

}  // namespace qjump
