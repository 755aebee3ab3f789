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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>

#include "qjump/errors.hpp"

namespace qjump {

struct Rk4Options {
  double dt = 0.01;          ///< initial (and, when not adaptive, fixed) step
  double rel_tol = 1e-8;     ///< local error bound relative to max(1, |y|)
  int max_halvings = 20;     ///< consecutive rejections before giving up
  bool adaptive = true;
  double dt_max = 0.5;       ///< ceiling for step growth in adaptive mode
};

namespace detail {

template <class State>
double max_abs_of(const State& y) {
  return y.size() == 0 ? 0.0 : y.cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Classical RK4 on any Eigen dense state. In adaptive mode every step is
/// checked by step doubling: the two half steps are accepted when they agree
/// with the full step to rel_tol, otherwise the step is halved.
template <class State>
class Rk4Integrator {
 public:
  using Rhs = std::function<void(double t, const State& y, State& dydt)>;

  Rk4Integrator(Rhs rhs, Rk4Options options) : rhs_(std::move(rhs)), opt_(options), h_(options.dt) {
    if (!(opt_.dt > 0.0)) throw InvalidArgument("Rk4Integrator: dt must be > 0");
    if (opt_.dt_max < opt_.dt) opt_.dt_max = opt_.dt;
  }

  /// Single classical RK4 step of size h from (t, y).
  void step(const State& y, double t, double h, State& out) {
    rhs_(t, y, k1_);
    tmp_ = y + (0.5 * h) * k1_;
    rhs_(t + 0.5 * h, tmp_, k2_);
    tmp_ = y + (0.5 * h) * k2_;
    rhs_(t + 0.5 * h, tmp_, k3_);
    tmp_ = y + h * k3_;
    rhs_(t + h, tmp_, k4_);
    out = y + (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

  /// Advance y from t to t_target (t is updated).
  void advance(State& y, double& t, double t_target) {
    while (t_target - t > 1e-14 * std::max(1.0, std::abs(t_target))) {
      double h = std::min(h_, t_target - t);
      const bool clipped = h < h_;
      if (!opt_.adaptive) {
        step(y, t, h, full_);
        y = full_;
        t += h;
        ++accepted_;
        continue;
      }
      int halvings = 0;
      for (;;) {
        step(y, t, h, full_);
        step(y, t, 0.5 * h, mid_);
        step(mid_, t + 0.5 * h, 0.5 * h, half_);
        const double err = detail::max_abs_of(State(half_ - full_)) / 15.0 /
                           std::max(1.0, detail::max_abs_of(half_));
        if (std::isfinite(err) && err <= opt_.rel_tol) {
          y = half_;
          t += h;
          ++accepted_;
          if (!clipped || halvings > 0) h_ = h;
          if (err < opt_.rel_tol / 32.0) h_ = std::min(2.0 * h_, opt_.dt_max);
          break;
        }
        if (++halvings > opt_.max_halvings) {
          throw StepSizeError("RK4: step size failure after " + std::to_string(opt_.max_halvings) +
                              " halvings at t=" + std::to_string(t));
        }
        h *= 0.5;
        ++rejected_;
      }
    }
    t = t_target;
  }

  double step_size() const { return h_; }
  std::size_t accepted_steps() const { return accepted_; }
  std::size_t rejected_steps() const { return rejected_; }

 private:
  Rhs rhs_;
  Rk4Options opt_;
  double h_;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
  State k1_, k2_, k3_, k4_, tmp_, full_, mid_, half_;
};

/// y <- exp(s A) y for a constant linear operator A given by `apply(in, out)`,
/// by Taylor series on substeps with s * bound / substeps <= 1/2, where
/// `bound` is any upper estimate of the operator norm of A.
template <class State, class Apply>
void taylor_propagate(const Apply& apply, State& y, double s, double bound) {
  if (s <= 0.0) return;
  const int substeps = std::max(1, static_cast<int>(std::ceil(2.0 * s * std::max(bound, 1e-300))));
  const double hs = s / substeps;
  State term, next, acc;
  for (int sub = 0; sub < substeps; ++sub) {
    term = y;
    acc = y;
    const double scale = std::max(detail::max_abs_of(y), 1e-300);
    for (int k = 1; k <= 60; ++k) {
      apply(term, next);
      term = (hs / k) * next;
      acc += term;
      if (detail::max_abs_of(term) < 1e-17 * scale && k >= 3) break;
    }
    y = acc;
  }
}

}  // namespace qjump
