// Copyright 2026 The LQS Solver Authors.
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

// Sequential linear optimization on the difference-of-convex split
// f_q = H_q - H_{q+1}.
//
// H_q is kept exact through its LP dual (theta, nu) and H_{q+1} is linearized
// at the current iterate, so each step minimizes the linear majorizer
//
//   Q((nu, theta, beta); beta_k) = theta (n - q + 1) + sum_i nu_i
//       - <g_k, beta - beta_k> - H_{q+1}(beta_k),   g_k in dH_{q+1}(beta_k),
//
// subject to theta + nu_i >= |y_i - x_i'beta|, nu >= 0.

#ifndef LQS_SEQUENTIAL_LO_H_
#define LQS_SEQUENTIAL_LO_H_

#include <vector>

#include <Eigen/Dense>

#include "lqs/dataset.h"
#include "lqs/lp.h"

namespace lqs {

struct SeqLoConfig {
  double tol = 1e-4;
  int max_iter = 200;
  bool record_trace = false;

  void Validate() const;
};

struct SeqLoState {
  Eigen::VectorXd beta;
  Eigen::VectorXd nu;
  double theta = 0.0;
  double objective = 0.0;  // F(nu, theta, beta)
  // Certificate <grad F(state), next - state> of the step taken from this
  // state; always <= 0. Zero for a terminal state.
  double delta = 0.0;
};

// Element of dH_m(beta): sum over the n - m + 1 largest |r_i| of
// -sgn(r_i) x_i, ties broken toward smaller indices, sgn(0) = +1.
Eigen::VectorXd HSubgradient(const Dataset& data, const Eigen::VectorXd& beta,
                             int m);

// H_m(beta) computed as the LP value of its dual representation
// min theta (n - m + 1) + sum nu  s.t. theta + nu_i >= |r_i|, nu >= 0.
double TopSumByLp(const Dataset& data, const Eigen::VectorXd& beta, int m);

// F(nu, theta, beta) = theta (n - q + 1) + sum nu - H_{q+1}(beta).
double SeqLoObjective(const Dataset& data, QuantileSpec q,
                      const Eigen::VectorXd& nu, double theta,
                      const Eigen::VectorXd& beta);

// The best (nu, theta) for a fixed beta: theta = |r_(q)|,
// nu_i = max(|r_i| - theta, 0); then F equals f_q(beta).
SeqLoState StateAt(const Dataset& data, QuantileSpec q,
                   const Eigen::VectorXd& beta);

struct LinearizedStepResult {
  SeqLoState next;       // (nu, theta) re-optimized for the new beta
  double lp_value = 0.0;  // theta (n-q+1) + sum nu - <g_k, beta> at the LP optimum
  double majorizer = 0.0;  // Q(next; beta_k)
  bool box_guard = false;
  LpBasis basis;
};

// Solves the linearized LP at beta_k. If the LP reports unboundedness the
// box ||beta - guard_center||_inf <= 10 (1 + ||guard_center||_inf) is added
// and `box_guard` set. Throws NumericalError on other LP failures.
LinearizedStepResult LinearizedStep(const Dataset& data, QuantileSpec q,
                                    const Eigen::VectorXd& beta_k,
                                    const Eigen::VectorXd& guard_center,
                                    const LpBasis* warm_start = nullptr);

struct SeqLoResult {
  FitResult fit;
  // states[k] is the k-th iterate (states[0] at beta_1), when recorded.
  std::vector<SeqLoState> states;
  int lp_solves = 0;
  bool box_guard_activated = false;
};

// Iterates LinearizedStep from `start` until the relative decrease of f_q
// falls to tol, a step fails to decrease, or max_iter steps were taken.
SeqLoResult SequentialLo(const Dataset& data, QuantileSpec q,
                         const Eigen::VectorXd& start,
                         const SeqLoConfig& config = {});

}  // namespace lqs

#endif  // LQS_SEQUENTIAL_LO_H_
