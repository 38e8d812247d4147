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

#include "lqs/sequential_lo.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "lqs/errors.h"
#include "lqs/fits.h"

namespace lqs {
namespace {

// Indices of the `count` largest |r_i|, ties toward smaller indices.
std::vector<int> TopIndices(const Eigen::VectorXd& r, int count) {
  std::vector<int> order(r.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(r(a)) > std::abs(r(b));
  });
  order.resize(count);
  return order;
}

void CheckM(const Dataset& data, int m) {
  if (m < 1 || m > data.n() + 1) {
    throw ValidationError("H_m: m=" + std::to_string(m) + " outside [1, " +
                          std::to_string(data.n() + 1) + "]");
  }
}

// The linearized LP is solved through its dual
//
//   max (a - b)'y  s.t.  X'(a - b) = -g,  sum (a + b) <= n - q + 1,
//                        0 <= a, b <= 1,
//
// which has p + 1 rows. The multipliers of the equality rows are -beta.
struct DualStep {
  LpSolution solution;
  Eigen::VectorXd beta;
};

DualStep SolveDualStep(const Dataset& data, int q, const Eigen::VectorXd& g,
                       const std::vector<int>& top, const Eigen::VectorXd& r,
                       const LpBasis* warm_start) {
  const int n = data.n();
  const int p = data.p();
  LinearProgram lp = LinearProgram::WithColumns(2 * n);
  lp.objective.head(n) = -data.y;
  lp.objective.tail(n) = data.y;
  lp.upper_bounds.setOnes();
  lp.constraint_matrix.resize(p + 1, 2 * n);
  lp.constraint_matrix.topLeftCorner(p, n) = data.X.transpose();
  lp.constraint_matrix.topRightCorner(p, n) = -data.X.transpose();
  lp.constraint_matrix.row(p).setOnes();
  lp.rhs.resize(p + 1);
  lp.rhs.head(p) = -g;
  lp.rhs(p) = n - q + 1;
  lp.row_senses.assign(p + 1, RowSense::kEqual);
  lp.row_senses[p] = RowSense::kLessEqual;

  LpBasis basis;
  if (warm_start != nullptr && !warm_start->empty()) {
    basis = *warm_start;
  } else {
    // u = sgn(r) on the top set reproduces -g exactly.
    basis.status.assign(2 * n + p + 1, BasisStatus::kAtLower);
    for (const int i : top) {
      basis.status[r(i) >= 0.0 ? i : n + i] = BasisStatus::kAtUpper;
    }
    for (int k = 0; k <= p; ++k) basis.status[2 * n + k] = BasisStatus::kBasic;
  }
  DualStep step;
  step.solution = SolveLp(lp, {}, &basis);
  if (step.solution.status == LpStatus::kOptimal) {
    step.beta = -step.solution.dual.head(p);
  }
  return step;
}

// Direct form with a guard box on beta; only used when the dual form fails.
LpSolution SolveGuardedStep(const Dataset& data, int q,
                            const Eigen::VectorXd& g,
                            const Eigen::VectorXd& center) {
  const int n = data.n();
  const int p = data.p();
  // Columns: nu (n), theta, beta (p).
  LinearProgram lp = LinearProgram::WithColumns(n + 1 + p);
  lp.objective.head(n).setOnes();
  lp.objective(n) = n - q + 1;
  lp.objective.tail(p) = -g;
  lp.lower_bounds(n) = -kInf;
  const double radius = 10.0 * (1.0 + center.lpNorm<Eigen::Infinity>());
  lp.lower_bounds.tail(p) = center.array() - radius;
  lp.upper_bounds.tail(p) = center.array() + radius;
  lp.constraint_matrix = Eigen::MatrixXd::Zero(2 * n, n + 1 + p);
  lp.rhs.resize(2 * n);
  lp.row_senses.assign(2 * n, RowSense::kGreaterEqual);
  for (int i = 0; i < n; ++i) {
    // theta + nu_i + x_i'beta >= y_i, theta + nu_i - x_i'beta >= -y_i.
    for (int s = 0; s < 2; ++s) {
      const int row = 2 * i + s;
      const double sign = s == 0 ? 1.0 : -1.0;
      lp.constraint_matrix(row, i) = 1.0;
      lp.constraint_matrix(row, n) = 1.0;
      lp.constraint_matrix.row(row).tail(p) = sign * data.X.row(i);
      lp.rhs(row) = sign * data.y(i);
    }
  }
  return SolveLp(lp);
}

}  // namespace

void SeqLoConfig::Validate() const {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw ValidationError("sequential LO: tol must be finite and > 0");
  }
  if (max_iter < 1) {
    throw ValidationError("sequential LO: max_iter must be >= 1");
  }
}

Eigen::VectorXd HSubgradient(const Dataset& data, const Eigen::VectorXd& beta,
                             int m) {
  CheckM(data, m);
  const Eigen::VectorXd r = data.Residuals(beta);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(data.p());
  for (const int i : TopIndices(r, data.n() - m + 1)) {
    const double sign = r(i) >= 0.0 ? 1.0 : -1.0;
    g -= sign * data.X.row(i).transpose();
  }
  return g;
}

double TopSumByLp(const Dataset& data, const Eigen::VectorXd& beta, int m) {
  CheckM(data, m);
  const int n = data.n();
  const Eigen::VectorXd r = data.Residuals(beta);
  // Columns: nu (n), theta.
  LinearProgram lp = LinearProgram::WithColumns(n + 1);
  lp.objective.head(n).setOnes();
  lp.objective(n) = n - m + 1;
  lp.lower_bounds(n) = -kInf;
  lp.constraint_matrix = Eigen::MatrixXd::Zero(n, n + 1);
  lp.constraint_matrix.leftCols(n).diagonal().setOnes();
  lp.constraint_matrix.col(n).setOnes();
  lp.rhs = r.cwiseAbs();
  lp.row_senses.assign(n, RowSense::kGreaterEqual);
  const LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw NumericalError(std::string("H_m LP ended with status ") +
                         LpStatusName(sol.status));
  }
  return sol.objective_value;
}

double SeqLoObjective(const Dataset& data, QuantileSpec q,
                      const Eigen::VectorXd& nu, double theta,
                      const Eigen::VectorXd& beta) {
  q.Validate(data.n());
  return theta * (data.n() - q.q + 1) + nu.sum() -
         TopSum(data.Residuals(beta), q.q + 1);
}

SeqLoState StateAt(const Dataset& data, QuantileSpec q,
                   const Eigen::VectorXd& beta) {
  q.Validate(data.n());
  const Eigen::VectorXd r = data.Residuals(beta);
  SeqLoState state;
  state.beta = beta;
  state.theta = OrderedAbsResidual(r, q);
  state.nu = (r.cwiseAbs().array() - state.theta).cwiseMax(0.0).matrix();
  state.objective = state.theta;
  return state;
}

LinearizedStepResult LinearizedStep(const Dataset& data, QuantileSpec q,
                                    const Eigen::VectorXd& beta_k,
                                    const Eigen::VectorXd& guard_center,
                                    const LpBasis* warm_start) {
  q.Validate(data.n());
  if (beta_k.size() != data.p() || guard_center.size() != data.p()) {
    throw ValidationError("sequential LO: beta has wrong length");
  }
  const Eigen::VectorXd r = data.Residuals(beta_k);
  const std::vector<int> top = TopIndices(r, data.n() - q.q);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(data.p());
  double h_next = 0.0;
  for (const int i : top) {
    const double sign = r(i) >= 0.0 ? 1.0 : -1.0;
    g -= sign * data.X.row(i).transpose();
    h_next += std::abs(r(i));
  }

  LinearizedStepResult result;
  Eigen::VectorXd beta;
  DualStep dual = SolveDualStep(data, q.q, g, top, r, warm_start);
  if (dual.solution.status == LpStatus::kOptimal) {
    beta = std::move(dual.beta);
    result.lp_value = -dual.solution.objective_value;
    result.basis = std::move(dual.solution.basis);
  } else {
    const LpSolution sol = SolveGuardedStep(data, q.q, g, guard_center);
    if (sol.status != LpStatus::kOptimal) {
      throw NumericalError(std::string("sequential LO: LP ended with status ") +
                           LpStatusName(sol.status));
    }
    beta = sol.primal.tail(data.p());
    result.lp_value = sol.objective_value;
    result.box_guard = true;
  }
  result.next = StateAt(data, q, beta);
  const double h_q = TopSum(data.Residuals(beta), q.q);
  result.majorizer = h_q - h_next - g.dot(beta - beta_k);
  return result;
}

SeqLoResult SequentialLo(const Dataset& data, QuantileSpec q,
                         const Eigen::VectorXd& start,
                         const SeqLoConfig& config) {
  config.Validate();
  q.Validate(data.n());
  if (start.size() != data.p()) {
    throw ValidationError("sequential LO: start has wrong length");
  }
  SeqLoResult result;
  SeqLoState current = StateAt(data, q, start);
  std::vector<SeqLoState> states;
  std::vector<double> trace = {current.objective};
  LpBasis basis;
  int accepted = 0;
  for (int k = 0; k < config.max_iter && current.objective > 0.0; ++k) {
    LinearizedStepResult step =
        LinearizedStep(data, q, current.beta, start, &basis);
    ++result.lp_solves;
    result.box_guard_activated |= step.box_guard;
    const double delta = step.majorizer - current.objective;
    // In exact arithmetic delta <= 0 and the objective cannot increase; a
    // violation only comes from rounding at a stationary point.
    if (delta > 0.0 || step.next.objective > current.objective) break;
    current.delta = delta;
    const double decrease = current.objective - step.next.objective;
    const double previous = current.objective;
    if (config.record_trace) states.push_back(std::move(current));
    current = std::move(step.next);
    trace.push_back(current.objective);
    basis = std::move(step.basis);
    ++accepted;
    if (decrease <= config.tol * previous) break;
  }
  current.delta = 0.0;

  result.fit.kind = FitKind::kLqs;
  result.fit.beta = current.beta;
  result.fit.residuals = data.Residuals(current.beta);
  result.fit.objective = current.objective;
  result.fit.iterations = accepted;
  if (config.record_trace) {
    states.push_back(std::move(current));
    result.states = std::move(states);
    result.fit.trace = std::move(trace);
  }
  return result;
}

}  // namespace lqs
