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

#include "qjump/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "qjump/dense_oracle.hpp"
#include "qjump/errors.hpp"
#include "qjump/io.hpp"
#include "qjump/lindblad.hpp"
#include "qjump/ode.hpp"
#include "qjump/parallel.hpp"

namespace qjump {

namespace {

constexpr std::ptrdiff_t kDenseLadderMaxDim = 256;

double vector_trace(const ComplexVector& v, std::ptrdiff_t d) {
  double s = 0.0;
  for (std::ptrdiff_t a = 0; a < d; ++a) s += v[a * d + a].real();
  return s;
}

void lower(ComplexVector& psi, int site, int n) {
  const std::size_t mask = site_mask(site, n);
  for (std::ptrdiff_t a = psi.size() - 1; a >= 0; --a) {
    const auto ua = static_cast<std::size_t>(a);
    if (ua & mask) {
      psi[a] = 2.0 * psi[static_cast<std::ptrdiff_t>(ua ^ mask)];
    }
  }
  for (std::ptrdiff_t a = 0; a < psi.size(); ++a) {
    if ((static_cast<std::size_t>(a) & mask) == 0) psi[a] = 0.0;
  }
}

double up_probability(const ComplexVector& psi, int site, int n) {
  const std::size_t mask = site_mask(site, n);
  double p = 0.0;
  for (std::ptrdiff_t a = 0; a < psi.size(); ++a) {
    if ((static_cast<std::size_t>(a) & mask) == 0) p += std::norm(psi[a]);
  }
  return p;
}

int count_events(const JumpRecord& rec, std::span<const int> sites, double t) {
  int n = 0;
  for (const auto& e : rec.events) {
    if (e.time > t) break;
    if (std::find(sites.begin(), sites.end(), e.site) != sites.end()) ++n;
  }
  return n;
}

void check_records(std::span<const JumpRecord> records, double t) {
  if (records.empty()) throw InvalidArgument("empirical_fcs: no records");
  for (const auto& r : records) {
    if (r.t_final < t * (1.0 - 1e-12)) throw InvalidArgument("empirical_fcs: record shorter than t");
  }
}

}  // namespace

std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master) ^ (index * 0xd1342543de82ef95ULL + 1));
}

PropagatorLadder::PropagatorLadder(const ComplexMatrix& A, double delta, int levels)
    : delta_(delta), levels_(levels) {
  if (!(delta > 0.0) || levels < 1) throw InvalidArgument("PropagatorLadder: bad step");
  if (A.rows() <= kDenseLadderMaxDim) {
    dense_.reserve(static_cast<std::size_t>(levels) + 1);
    for (int k = 0; k <= levels; ++k) {
      Eigen::MatrixXcd scaled = std::ldexp(delta, -k) * A;
      dense_.emplace_back(scaled.exp());
    }
    return;
  }
  const ComplexMatrix op = A;
  apply_ = [op](const ComplexVector& in, ComplexVector& out) { out.noalias() = op * in; };
  bound_ = A.cwiseAbs().rowwise().sum().maxCoeff();
}

PropagatorLadder::PropagatorLadder(Apply apply, double norm_bound, double delta, int levels)
    : delta_(delta), levels_(levels), apply_(std::move(apply)), bound_(norm_bound) {
  if (!(delta > 0.0) || levels < 1) throw InvalidArgument("PropagatorLadder: bad step");
}

double PropagatorLadder::step_size(int level) const { return std::ldexp(delta_, -level); }

void PropagatorLadder::step(int level, const ComplexVector& in, ComplexVector& out) const {
  if (!dense_.empty()) {
    out.noalias() = dense_[static_cast<std::size_t>(level)] * in;
    return;
  }
  out = in;
  taylor_propagate(apply_, out, step_size(level), bound_);
}

PropagatorLadder::Advance PropagatorLadder::advance_until(
    ComplexVector& v, double span, const std::function<double(const ComplexVector&)>& measure,
    double threshold) const {
  Advance adv;
  ComplexVector trial(v.size());
  int level = 0;
  const double slack = 1e-13 * std::max(1.0, span);
  while (level <= levels_) {
    const double h = step_size(level);
    // below the resolution of elapsed nothing moves
    if (adv.elapsed + h == adv.elapsed || (!adv.crossed && span - adv.elapsed <= slack)) break;
    if (adv.elapsed + h > span + slack) {
      ++level;
      continue;
    }
    step(level, v, trial);
    if (measure(trial) >= threshold) {
      v.swap(trial);
      adv.elapsed += h;
    } else {
      adv.crossed = true;
      ++level;
    }
  }
  if (adv.crossed) {
    adv.elapsed += step_size(levels_ + 1);
  } else {
    adv.elapsed = span;
  }
  return adv;
}

McwfSolver::McwfSolver(const ComplexMatrix& H, std::vector<double> decay)
    : n_sites_(sites_for_dim(H.rows())), decay_(std::move(decay)) {
  if (static_cast<int>(decay_.size()) != n_sites_) throw DimensionMismatch("McwfSolver: decay per site");
  if (n_sites_ > 12) throw DimensionMismatch("McwfSolver: more than 12 sites");
  H_nh_ = H;
  double total = 0.0;
  for (int j = 0; j < n_sites_; ++j) {
    if (decay_[j] < 0.0) throw InvalidArgument("McwfSolver: negative decay");
    total += decay_[j];
    const std::size_t mask = site_mask(j, n_sites_);
    for (std::ptrdiff_t a = 0; a < H.rows(); ++a) {
      // (gamma/2) s+ s- = 2 gamma |up><up|
      if ((static_cast<std::size_t>(a) & mask) == 0) H_nh_(a, a) -= Complex(0.0, 2.0 * decay_[j]);
    }
  }
  any_decay_ = total > 0.0;
  const double delta = any_decay_ ? 0.5 / (4.0 * total) : 1.0;
  ladder_ = std::make_unique<PropagatorLadder>(ComplexMatrix(Complex(0.0, -1.0) * H_nh_), delta);
}

std::pair<PureState, JumpRecord> McwfSolver::run(const ComplexVector& psi0, double t_final,
                                                 std::uint64_t seed) const {
  Rng rng(seed);
  return run(psi0, t_final, rng, seed);
}

std::pair<PureState, JumpRecord> McwfSolver::run(const ComplexVector& psi0, double t_final, Rng& rng,
                                                 std::uint64_t seed) const {
  if (psi0.size() != H_nh_.rows()) throw DimensionMismatch("mcwf: psi0 dimension");
  if (!(t_final >= 0.0)) throw InvalidArgument("mcwf: t_final must be >= 0");
  const double n0 = psi0.norm();
  if (!(n0 > 0.0)) throw InvalidArgument("mcwf: zero initial state");
  ComplexVector psi = psi0 / n0;
  JumpRecord record;
  record.t_final = t_final;
  record.seed = seed;
  const auto norm2 = [](const ComplexVector& v) { return v.squaredNorm(); };
  double t = 0.0;
  double r = any_decay_ ? rng.uniform() : -1.0;
  while (t < t_final) {
    const auto adv = ladder_->advance_until(psi, t_final - t, norm2, r);
    t = std::min(t_final, t + adv.elapsed);
    if (!adv.crossed) break;
    double total = 0.0;
    std::vector<double> w(static_cast<std::size_t>(n_sites_));
    for (int j = 0; j < n_sites_; ++j) {
      w[j] = decay_[j] * 4.0 * up_probability(psi, j, n_sites_);
      total += w[j];
    }
    int site = n_sites_ - 1;
    double u = rng.uniform() * total;
    for (int j = 0; j < n_sites_; ++j) {
      if (u < w[j]) {
        site = j;
        break;
      }
      u -= w[j];
    }
    while (site > 0 && w[site] == 0.0) --site;
    lower(psi, site, n_sites_);
    const double nn = psi.norm();
    if (!(nn > 0.0)) throw Error(ErrorCode::Internal, "mcwf: jump annihilated the state");
    psi /= nn;
    record.events.push_back({t, site});
    r = rng.uniform();
  }
  PureState out;
  out.amplitudes = psi / psi.norm();
  out.norm2 = out.amplitudes.squaredNorm();
  return {std::move(out), std::move(record)};
}

std::pair<PureState, JumpRecord> mcwf_trajectory(const ModelParams& p, const ComplexVector& psi0, double t_final,
                                                 std::uint64_t seed) {
  const McwfSolver solver(build_full_hamiltonian(p), std::vector<double>(static_cast<std::size_t>(p.N), p.gamma));
  return solver.run(psi0, t_final, seed);
}

TrajectoryEnsemble mcwf_ensemble(const ComplexMatrix& H, std::vector<double> decay, const ComplexMatrix& rho0,
                                 int n_trajectories, double t_final, std::uint64_t master_seed) {
  if (n_trajectories < 1) throw InvalidArgument("mcwf_ensemble: need at least one trajectory");
  if (rho0.rows() != H.rows()) throw DimensionMismatch("mcwf_ensemble: rho0 dimension");
  const McwfSolver solver(H, std::move(decay));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(Eigen::MatrixXcd(0.5 * (rho0 + rho0.adjoint())));
  std::vector<double> weights(static_cast<std::size_t>(rho0.rows()));
  double total = 0.0;
  for (std::ptrdiff_t i = 0; i < rho0.rows(); ++i) {
    weights[i] = std::max(0.0, eig.eigenvalues()[i]);
    total += weights[i];
  }
  std::vector<ComplexVector> finals(static_cast<std::size_t>(n_trajectories));
  TrajectoryEnsemble ens;
  ens.records.resize(static_cast<std::size_t>(n_trajectories));
  parallel_for(static_cast<std::size_t>(n_trajectories), [&](std::size_t i) {
    const std::uint64_t seed = trajectory_seed(master_seed, i);
    Rng rng(seed);
    double u = rng.uniform() * total;
    std::ptrdiff_t pick = rho0.rows() - 1;
    for (std::ptrdiff_t k = 0; k < rho0.rows(); ++k) {
      if (u < weights[k]) {
        pick = k;
        break;
      }
      u -= weights[k];
    }
    while (pick > 0 && weights[pick] == 0.0) --pick;
    ComplexVector psi0 = eig.eigenvectors().col(pick);
    auto [state, rec] = solver.run(psi0, t_final, rng, seed);
    finals[i] = std::move(state.amplitudes);
    ens.records[i] = std::move(rec);
  });
  ens.mean_state = ComplexMatrix::Zero(H.rows(), H.cols());
  for (const auto& psi : finals) ens.mean_state += psi * psi.adjoint();
  ens.mean_state /= static_cast<double>(n_trajectories);
  return ens;
}

CountDistribution empirical_fcs(std::span<const JumpRecord> records, std::span<const int> sites, double t) {
  check_records(records, t);
  std::vector<int> counts;
  counts.reserve(records.size());
  int max_count = 0;
  for (const auto& r : records) {
    counts.push_back(count_events(r, sites, t));
    max_count = std::max(max_count, counts.back());
  }
  CountDistribution dist;
  dist.rank = 1;
  dist.grid_size = max_count + 1;
  dist.t = t;
  dist.counted_sites.assign(sites.begin(), sites.end());
  dist.probs.assign(static_cast<std::size_t>(dist.grid_size), 0.0);
  for (int c : counts) dist.probs[c] += 1.0 / static_cast<double>(records.size());
  return dist;
}

CountDistribution empirical_joint_fcs(std::span<const JumpRecord> records, int site1, int site2, double t) {
  check_records(records, t);
  std::vector<std::pair<int, int>> counts;
  int max_count = 0;
  for (const auto& r : records) {
    const int a = count_events(r, std::span<const int>(&site1, 1), t);
    const int b = count_events(r, std::span<const int>(&site2, 1), t);
    counts.emplace_back(a, b);
    max_count = std::max({max_count, a, b});
  }
  CountDistribution dist;
  dist.rank = 2;
  dist.grid_size = max_count + 1;
  dist.t = t;
  dist.counted_sites = {site1, site2};
  dist.probs.assign(static_cast<std::size_t>(dist.grid_size) * dist.grid_size, 0.0);
  for (auto [a, b] : counts) {
    dist.probs[static_cast<std::size_t>(a) * dist.grid_size + b] += 1.0 / static_cast<double>(records.size());
  }
  return dist;
}

MonitoredCluster::MonitoredCluster(const ComplexMatrix& H, std::vector<double> decay, int monitored_site)
    : site_(monitored_site), dim_(H.rows()) {
  const int n = sites_for_dim(H.rows());
  if (static_cast<int>(decay.size()) != n) throw DimensionMismatch("MonitoredCluster: decay per site");
  if (site_ < 0 || site_ >= n) throw InvalidArgument("MonitoredCluster: monitored site out of range");
  if (n > 6) throw DimensionMismatch("MonitoredCluster: cluster larger than 6 sites");
  Generator gen;
  gen.H = H;
  gen.decay = decay;
  gen.jump_weight.assign(decay.begin(), decay.end());
  gen.jump_weight[static_cast<std::size_t>(site_)] = Complex(0.0, 0.0);
  double gmax = 0.0;
  for (double g : decay) gmax = std::max(gmax, g);
  const double delta = gmax > 0.0 ? 0.5 / gmax : 1.0;
  auto kernel = std::make_shared<LindbladKernel>(gen);
  if (dim_ * dim_ <= kDenseLadderMaxDim) {
    ladder_ = std::make_unique<PropagatorLadder>(kernel->superoperator(), delta);
  } else {
    const std::ptrdiff_t d = dim_;
    ladder_ = std::make_unique<PropagatorLadder>(
        [kernel, d](const ComplexVector& in, ComplexVector& out) {
          ComplexMatrix rho = unvectorize(in, d);
          out = vectorize(kernel->apply(rho));
        },
        kernel->norm_bound(), delta);
  }
}

WaitOutcome MonitoredCluster::next_click(ComplexMatrix& rho, Rng& rng, double horizon) const {
  if (rho.rows() != dim_) throw DimensionMismatch("MonitoredCluster: state dimension");
  const std::ptrdiff_t d = dim_;
  ComplexVector v = vectorize(rho);
  const double r = rng.uniform();
  const auto adv = ladder_->advance_until(
      v, horizon, [d](const ComplexVector& x) { return vector_trace(x, d); }, r);
  ComplexMatrix state = unvectorize(v, d);
  if (!adv.crossed) {
    const double tr = state.trace().real();
    rho = tr > 0.0 ? ComplexMatrix(state / tr) : state;
    return {horizon, true};
  }
  ComplexMatrix after = apply_jump(state, site_);
  const double tr = after.trace().real();
  if (!(tr > 0.0)) throw Error(ErrorCode::Internal, "monitored cluster: click on an empty channel");
  rho = after / tr;
  return {adv.elapsed, false};
}

ComplexMatrix monitored_cluster_steady_state(const ModelParams& p, const MeanFieldDrive& drive) {
  return steady_state(make_generator(build_monitored_hamiltonian(p, drive), p.gamma)).matrix;
}

JumpRecord monitored_cluster_trajectory(const ModelParams& p, const MeanFieldDrive& drive, double t_final,
                                        std::uint64_t seed, const ComplexMatrix& rho0) {
  if (p.Nc > 6) throw DimensionMismatch("monitored cluster: Nc > 6");
  const ComplexMatrix H = build_monitored_hamiltonian(p, drive);
  const MonitoredCluster cluster(H, std::vector<double>(static_cast<std::size_t>(p.Nc), p.gamma), 0);
  ComplexMatrix rho = rho0.size() == 0 ? monitored_cluster_steady_state(p, drive) : rho0;
  if (rho.rows() != H.rows()) throw DimensionMismatch("monitored cluster: rho0 dimension");
  Rng rng(seed);
  JumpRecord record;
  record.seed = seed;
  record.t_final = t_final;
  double t = 0.0;
  while (t < t_final) {
    const auto out = cluster.next_click(rho, rng, t_final - t);
    if (out.censored) break;
    t += out.wait;
    record.events.push_back({t, 0});
  }
  return record;
}

void write_jump_records(std::span<const JumpRecord> records, std::ostream& out) {
  out << "trajectory_id,time,site\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    out << "# trajectory " << i << " seed " << records[i].seed << " t_final " << format_double(records[i].t_final)
        << '\n';
    for (const auto& e : records[i].events) out << i << ',' << format_double(e.time) << ',' << e.site << '\n';
  }
}

std::vector<JumpRecord> read_jump_records(std::istream& in) {
  std::vector<JumpRecord> records;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string k1, k2, k3;
      std::size_t id = 0;
      std::uint64_t seed = 0;
      std::string tf;
      if (!(ss >> k1 >> id >> k2 >> seed >> k3 >> tf) || k1 != "trajectory" || k2 != "seed" || k3 != "t_final") {
        throw IoError("jump records: malformed trajectory comment");
      }
      if (id != records.size()) throw IoError("jump records: trajectory ids must be consecutive");
      JumpRecord rec;
      rec.seed = seed;
      rec.t_final = std::stod(tf);
      records.push_back(rec);
      continue;
    }
    if (!header) {
      if (line != "trajectory_id,time,site") throw IoError("jump records: unexpected header");
      header = true;
      continue;
    }
    std::istringstream ss(line);
    std::string id, time, site;
    if (!std::getline(ss, id, ',') || !std::getline(ss, time, ',') || !std::getline(ss, site)) {
      throw IoError("jump records: malformed row");
    }
    const std::size_t idx = std::stoul(id);
    if (idx + 1 != records.size()) throw IoError("jump records: event outside its trajectory block");
    records.back().events.push_back({std::stod(time), std::stoi(site)});
  }
  if (!header) throw IoError("jump records: missing header");
  return records;
}

}  // namespace qjump
