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
#include <memory>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "qjump/counting.hpp"
#include "qjump/model.hpp"
#include "qjump/spin_algebra.hpp"

namespace qjump {

struct PureState {
  ComplexVector amplitudes;
  double norm2 = 1.0;
};

struct JumpEvent {
  double time = 0.0;
  int site = 0;
};

struct JumpRecord {
  std::vector<JumpEvent> events;
  double t_final = 0.0;
  std::uint64_t seed = 0;
};

/// splitmix64 mix of (master, index): per-trajectory seeds independent of scheduling.
std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// exp(A delta / 2^k) for k = 0..levels, for a constant linear operator A on
/// vectors. Small operators are exponentiated once; large ones fall back to
/// Taylor propagation with `apply`.
class PropagatorLadder {
 public:
  using Apply = std::function<void(const ComplexVector&, ComplexVector&)>;

  PropagatorLadder(const ComplexMatrix& A, double delta, int levels = 40);
  PropagatorLadder(Apply apply, double norm_bound, double delta, int levels = 40);

  void step(int level, const ComplexVector& in, ComplexVector& out) const;
  double step_size(int level) const;
  double delta() const { return delta_; }
  int levels() const { return levels_; }

  struct Advance {
    double elapsed = 0.0;
    bool crossed = false;
  };

  /// Advances v by at most `span`, stopping at the first point where
  /// measure(v) drops below threshold (measure must be non-increasing).
  Advance advance_until(ComplexVector& v, double span, const std::function<double(const ComplexVector&)>& measure,
                        double threshold) const;

 private:
  double delta_;
  int levels_;
  std::vector<ComplexMatrix> dense_;
  Apply apply_;
  double bound_ = 0.0;
};

/// Monte Carlo wavefunction unraveling for H with decay gamma_j on each site.
class McwfSolver {
 public:
  McwfSolver(const ComplexMatrix& H, std::vector<double> decay);

  /// Trajectory from psi0 (normalized internally) up to t_final.
  std::pair<PureState, JumpRecord> run(const ComplexVector& psi0, double t_final, std::uint64_t seed) const;
  std::pair<PureState, JumpRecord> run(const ComplexVector& psi0, double t_final, Rng& rng,
                                       std::uint64_t seed) const;

  int n_sites() const { return n_sites_; }

 private:
  int n_sites_;
  std::vector<double> decay_;
  ComplexMatrix H_nh_;
  bool any_decay_ = false;
  std::unique_ptr<PropagatorLadder> ladder_;
};

std::pair<PureState, JumpRecord> mcwf_trajectory(const ModelParams& p, const ComplexVector& psi0, double t_final,
                                                 std::uint64_t seed);

struct TrajectoryEnsemble {
  std::vector<JumpRecord> records;
  ComplexMatrix mean_state;  ///< average of |psi><psi| at t_final
};

/// n trajectories with initial pure states sampled from the eigen-decomposition of rho0.
TrajectoryEnsemble mcwf_ensemble(const ComplexMatrix& H, std::vector<double> decay, const ComplexMatrix& rho0,
                                 int n_trajectories, double t_final, std::uint64_t master_seed);

/// Histogram of the total count on `sites` with event time <= t.
CountDistribution empirical_fcs(std::span<const JumpRecord> records, std::span<const int> sites, double t);
/// Joint histogram of the counts on two sites (square support).
CountDistribution empirical_joint_fcs(std::span<const JumpRecord> records, int site1, int site2, double t);

struct WaitOutcome {
  double wait = 0.0;
  bool censored = false;
};

/// Density-matrix unraveling monitoring one site of a cluster: deterministic
/// flow under the Lindbladian with the monitored channel removed, clicks
/// sampled from the resulting trace decay.
class MonitoredCluster {
 public:
  MonitoredCluster(const ComplexMatrix& H, std::vector<double> decay, int monitored_site = 0);

  /// Evolves the normalized state rho until a click (rho becomes the
  /// normalized post-click state) or until `horizon` elapses (censored).
  WaitOutcome next_click(ComplexMatrix& rho, Rng& rng, double horizon) const;

  int monitored_site() const { return site_; }
  std::ptrdiff_t dim() const { return dim_; }

 private:
  int site_;
  std::ptrdiff_t dim_;
  std::unique_ptr<PropagatorLadder> ladder_;
};

/// Cluster steady state of the full (unmonitored) Lindbladian with the given drive.
ComplexMatrix monitored_cluster_steady_state(const ModelParams& p, const MeanFieldDrive& drive);

/// Site-0 click record of the monitored cluster up to t_final. rho0 empty:
/// start from monitored_cluster_steady_state.
JumpRecord monitored_cluster_trajectory(const ModelParams& p, const MeanFieldDrive& drive, double t_final,
                                        std::uint64_t seed, const ComplexMatrix& rho0 = {});

/// CSV (trajectory_id, time, site); each trajectory also gets a
/// "# trajectory <id> seed <seed> t_final <t>" comment so empty records survive.
void write_jump_records(std::span<const JumpRecord> records, std::ostream& out);
std::vector<JumpRecord> read_jump_records(std::istream& in);

}  // namespace qjump
