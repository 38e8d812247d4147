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

// Dense bounded-variable primal simplex.
//
// Problems are stated as
//
//   min  c'x   s.t.  a_i'x {<=, =, >=} b_i,   l <= x <= u,
//
// with infinite bounds allowed. Internally every row receives a slack s_i so
// that a_i'x + s_i = b_i, with s_i in [0, inf) for <=, (-inf, 0] for >= and
// [0, 0] for equality rows. The basis inverse is kept explicitly and updated
// with product-form eta steps between periodic refactorizations.
//
// Phase 1 minimizes the sum of bound violations of the basic variables
// (composite phase 1), so any nonsingular starting basis can be used; this is
// what makes warm starts across branch-and-bound nodes cheap.
//
// Dual convention: row multipliers y satisfy d = c - A'y, where d are the
// reduced costs of the structural columns. For a minimization, an active <=
// row has y_i <= 0 and an active >= row has y_i >= 0.

#ifndef LQS_LP_H_
#define LQS_LP_H_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lqs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense : std::uint8_t { kLessEqual, kEqual, kGreaterEqual };

struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd constraint_matrix;  // rows x cols
  std::vector<RowSense> row_senses;
  Eigen::VectorXd rhs;
  Eigen::VectorXd lower_bounds;
  Eigen::VectorXd upper_bounds;

  // Empty problem with `num_cols` variables in [0, inf) and zero cost.
  static LinearProgram WithColumns(int num_cols);

  int num_rows() const { return static_cast<int>(constraint_matrix.rows()); }
  int num_cols() const { return static_cast<int>(constraint_matrix.cols()); }

  // Appends a row and returns its index. `coefficients` must have num_cols()
  // entries.
  int AddRow(const Eigen::Ref<const Eigen::VectorXd>& coefficients,
             RowSense sense, double rhs_value);

  // Throws ValidationError when the invariants on dimensions, bound ordering
  // or finiteness of the data are violated.
  void Validate() const;
};

enum class LpStatus : std::uint8_t {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
};

const char* LpStatusName(LpStatus status);

enum class BasisStatus : std::uint8_t {
  kBasic,
  kAtLower,
  kAtUpper,
  kFree,  // nonbasic free variable held at zero
};

// Status of every structural column followed by every row slack.
struct LpBasis {
  std::vector<BasisStatus> status;
  bool empty() const { return status.empty(); }
};

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  Eigen::VectorXd primal;         // structural values
  Eigen::VectorXd dual;           // row multipliers y
  Eigen::VectorXd reduced_costs;  // c - A'y
  double objective_value = 0.0;
  int iterations = 0;
  bool used_bland = false;
  LpBasis basis;
};

struct LpOptions {
  double feas_tol = 1e-8;
  double opt_tol = 1e-9;
  double pivot_tol = 1e-10;
  double duality_gap_tol = 1e-7;  // relative, see DualityGapOk()
  // 0 selects max(1000, 50 * (rows + cols)).
  int iteration_limit = 0;
  int refactor_interval = 64;
};

// Solves `lp`. A warm-start basis is used when it has the right size and is
// nonsingular; otherwise the slack basis is used. Deterministic for identical
// inputs. Throws ValidationError on malformed input.
LpSolution SolveLp(const LinearProgram& lp, const LpOptions& options = {},
                   const LpBasis* warm_start = nullptr);

// Lagrangian dual value y'b + sum_j min_{l_j <= x_j <= u_j} d_j x_j, taken over
// structural columns and row slacks. Returns -inf when a reduced cost has the
// wrong sign for an infinite bound by more than `opt_tol`.
double DualObjective(const LinearProgram& lp, const LpSolution& solution,
                     double opt_tol = 1e-9);

// Largest violation of a row or bound at `x`, each row scaled by 1 + |b_i|.
double MaxPrimalViolation(const LinearProgram& lp, const Eigen::VectorXd& x);

// |primal - dual| <= duality_gap_tol * (1 + |primal|).
bool DualityGapOk(const LinearProgram& lp, const LpSolution& solution,
                  const LpOptions& options = {});

// Plain-text fixed-column listing of the problem, for debugging.
std::string DumpLp(const LinearProgram& lp);

}  // namespace lqs

#endif  // LQS_LP_H_
