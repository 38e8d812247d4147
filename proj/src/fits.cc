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

#include "lqs/fits.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "lqs/errors.h"
#include "lqs/lp.h"

namespace lqs {
namespace {

FitResult MakeFit(const Dataset& data, Eigen::VectorXd beta, double objective,
                  FitKind kind) {
  FitResult fit;
  fit.residuals = data.Residuals(beta);
  fit.beta = std::move(beta);
  fit.objective = objective;
  fit.kind = kind;
  return fit;
}

// Columns: beta (p), t. Two rows per subset sample plus the polyhedral rows.
LinearProgram ChebyshevLp(const Dataset& data, std::span<const int> subset,
                          const BetaConstraints& constraints) {
  const int p = data.p();
  LinearProgram lp = LinearProgram::WithColumns(p + 1);
  lp.objective(p) = 1.0;
  for (int j = 0; j < p; ++j) {
    if (constraints.box) {
      lp.lower_bounds(j) =
          constraints.box->center(j) - constraints.box->radius;
      lp.upper_bounds(j) =
          constraints.box->center(j) + constraints.box->radius;
    } else {
      lp.lower_bounds(j) = -kInf;
    }
  }
  const int rows = 2 * static_cast<int>(subset.size()) +
                   static_cast<int>(constraints.A.rows());
  lp.constraint_matrix = Eigen::MatrixXd::Zero(rows, p + 1);
  lp.rhs.resize(rows);
  lp.row_senses.resize(rows);
  int row = 0;
  for (const int i : subset) {
    // x_i'beta + t >= y_i  and  x_i'beta - t <= y_i.
    lp.constraint_matrix.row(row).head(p) = data.X.row(i);
    lp.constraint_matrix(row, p) = 1.0;
    lp.rhs(row) = data.y(i);
    lp.row_senses[row++] = RowSense::kGreaterEqual;
    lp.constraint_matrix.row(row).head(p) = data.X.row(i);
    lp.constraint_matrix(row, p) = -1.0;
    lp.rhs(row) = data.y(i);
    lp.row_senses[row++] = RowSense::kLessEqual;
  }
  for (Eigen::Index k = 0; k < constraints.A.rows(); ++k) {
    lp.constraint_matrix.row(row).head(p) = constraints.A.row(k);
    lp.rhs(row) = constraints.b(k);
    lp.row_senses[row++] = RowSense::kLessEqual;
  }
  return lp;
}

void CheckSubset(const Dataset& data, std::span<const int> subset) {
  for (const int i : subset) {
    if (i < 0 || i >= data.n()) {
      throw ValidationError("subset index " + std::to_string(i) +
                            " out of range for n=" + std::to_string(data.n()));
    }
  }
}

// Dual of min t s.t. |y_i - x_i'beta| <= t over the subset:
//   max sum_i (a_i - b_i) y_i  s.t.  sum_i (a_i - b_i) x_i = 0,
//                                    sum_i (a_i + b_i) <= 1,  a, b >= 0.
// It has p + 1 rows regardless of the subset size; beta is minus the
// multipliers of the equality rows.
FitResult UnconstrainedChebyshev(const Dataset& data,
                                 std::span<const int> subset) {
  const int p = data.p();
  const int k = static_cast<int>(subset.size());
  LinearProgram lp = LinearProgram::WithColumns(2 * k);
  lp.constraint_matrix = Eigen::MatrixXd::Zero(p + 1, 2 * k);
  for (int s = 0; s < k; ++s) {
    const int i = subset[s];
    lp.objective(s) = -data.y(i);
    lp.objective(k + s) = data.y(i);
    lp.constraint_matrix.col(s).head(p) = data.X.row(i).transpose();
    lp.constraint_matrix.col(k + s).head(p) = -data.X.row(i).transpose();
    lp.constraint_matrix(p, s) = 1.0;
    lp.constraint_matrix(p, k + s) = 1.0;
  }
  lp.rhs = Eigen::VectorXd::Zero(p + 1);
  lp.rhs(p) = 1.0;
  lp.row_senses.assign(p + 1, RowSense::kEqual);
  lp.row_senses[p] = RowSense::kLessEqual;
  const LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw NumericalError(std::string("Chebyshev fit: LP ended with status ") +
                         LpStatusName(sol.status));
  }
  FitResult fit = MakeFit(data, -sol.dual.head(p), 0.0, FitKind::kChebyshev);
  double t = 0.0;
  for (const int i : subset) t = std::max(t, std::abs(fit.residuals(i)));
  fit.objective = t;
  fit.iterations = sol.iterations;
  return fit;
}

std::vector<int> AbsOrder(const Eigen::VectorXd& residuals) {
  std::vector<int> order(residuals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(residuals(a)) < std::abs(residuals(b));
  });
  return order;
}

}  // namespace

FitResult LeastSquaresFit(const Dataset& data) {
  data.Validate();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(data.X);
  Eigen::VectorXd beta = cod.solve(data.y);
  FitResult fit = MakeFit(data, std::move(beta), 0.0, FitKind::kLeastSquares);
  fit.objective = fit.residuals.squaredNorm();
  fit.rank_deficient = cod.rank() < data.p();
  return fit;
}

FitResult LadFit(const Dataset& data) {
  data.Validate();
  const int n = data.n();
  const int p = data.p();
  // Solved through the dual  max y'u  s.t.  X'u = 0, -1 <= u <= 1, which has
  // p rows instead of n. The equality multipliers are -beta.
  LinearProgram lp = LinearProgram::WithColumns(n);
  lp.objective = -data.y;
  lp.lower_bounds.setConstant(-1.0);
  lp.upper_bounds.setConstant(1.0);
  lp.constraint_matrix = data.X.transpose();
  lp.rhs = Eigen::VectorXd::Zero(p);
  lp.row_senses.assign(p, RowSense::kEqual);
  const LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw NumericalError(std::string("LAD fit: LP ended with status ") +
                         LpStatusName(sol.status));
  }
  FitResult fit = MakeFit(data, -sol.dual, 0.0, FitKind::kLad);
  fit.objective = fit.residuals.cwiseAbs().sum();
  fit.iterations = sol.iterations;
  return fit;
}

std::optional<FitResult> ConstrainedChebyshevFit(
    const Dataset& data, std::span<const int> subset,
    const BetaConstraints& constraints) {
  CheckSubset(data, subset);
  constraints.Validate(data.p());
  if (constraints.empty() && !subset.empty()) {
    return UnconstrainedChebyshev(data, subset);
  }
  const LinearProgram lp = ChebyshevLp(data, subset, constraints);
  const LpSolution sol = SolveLp(lp);
  if (sol.status == LpStatus::kInfeasible) return std::nullopt;
  if (sol.status != LpStatus::kOptimal) {
    throw NumericalError(std::string("Chebyshev fit: LP ended with status ") +
                         LpStatusName(sol.status));
  }
  FitResult fit =
      MakeFit(data, sol.primal.head(data.p()), 0.0, FitKind::kChebyshev);
  // Report the max residual at the returned beta rather than the LP's t, so
  // that objective and residuals agree exactly.
  double t = 0.0;
  for (const int i : subset) t = std::max(t, std::abs(fit.residuals(i)));
  fit.objective = t;
  fit.iterations = sol.iterations;
  return fit;
}

FitResult ChebyshevFit(const Dataset& data, std::span<const int> subset) {
  if (subset.empty()) {
    throw ValidationError("Chebyshev fit: empty subset");
  }
  std::optional<FitResult> fit =
      ConstrainedChebyshevFit(data, subset, BetaConstraints{});
  if (!fit) throw NumericalError("Chebyshev fit: LP reported infeasible");
  return *std::move(fit);
}

double OrderedAbsResidual(const Eigen::VectorXd& residuals, QuantileSpec q) {
  q.Validate(static_cast<int>(residuals.size()));
  std::vector<double> abs(residuals.size());
  for (Eigen::Index i = 0; i < residuals.size(); ++i) {
    abs[i] = std::abs(residuals(i));
  }
  std::nth_element(abs.begin(), abs.begin() + (q.q - 1), abs.end());
  return abs[q.q - 1];
}

double LqsObjective(const Dataset& data, const Eigen::VectorXd& beta,
                    QuantileSpec q) {
  return OrderedAbsResidual(data.Residuals(beta), q);
}

int QuantileSampleIndex(const Eigen::VectorXd& residuals, QuantileSpec q) {
  const double level = OrderedAbsResidual(residuals, q);
  for (Eigen::Index i = 0; i < residuals.size(); ++i) {
    if (std::abs(residuals(i)) == level) return static_cast<int>(i);
  }
  return -1;  // unreachable
}

double TopSum(const Eigen::VectorXd& residuals, int m) {
  const int n = static_cast<int>(residuals.size());
  if (m < 1 || m > n + 1) {
    throw ValidationError("TopSum: m=" + std::to_string(m) + " outside [1, " +
                          std::to_string(n + 1) + "]");
  }
  const std::vector<int> order = AbsOrder(residuals);
  double sum = 0.0;
  for (int k = n - 1; k >= m - 1; --k) sum += std::abs(residuals(order[k]));
  return sum;
}

int CountAtLevel(const Eigen::VectorXd& residuals, double t, double tol) {
  int count = 0;
  for (Eigen::Index i = 0; i < residuals.size(); ++i) {
    if (std::abs(std::abs(residuals(i)) - t) <= tol * (1.0 + t)) ++count;
  }
  return count;
}

}  // namespace lqs
