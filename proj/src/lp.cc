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

#include "lqs/lp.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "lqs/errors.h"

namespace lqs {

LinearProgram LinearProgram::WithColumns(int num_cols) {
  LinearProgram lp;
  lp.objective = Eigen::VectorXd::Zero(num_cols);
  lp.constraint_matrix.resize(0, num_cols);
  lp.rhs.resize(0);
  lp.lower_bounds = Eigen::VectorXd::Zero(num_cols);
  lp.upper_bounds = Eigen::VectorXd::Constant(num_cols, kInf);
  return lp;
}

int LinearProgram::AddRow(const Eigen::Ref<const Eigen::VectorXd>& coefficients,
                          RowSense sense, double rhs_value) {
  if (coefficients.size() != constraint_matrix.cols()) {
    throw ValidationError("AddRow: coefficient count does not match columns");
  }
  const Eigen::Index row = constraint_matrix.rows();
  constraint_matrix.conservativeResize(row + 1, Eigen::NoChange);
  constraint_matrix.row(row) = coefficients.transpose();
  rhs.conservativeResize(row + 1);
  rhs(row) = rhs_value;
  row_senses.push_back(sense);
  return static_cast<int>(row);
}

void LinearProgram::Validate() const {
  const Eigen::Index m = constraint_matrix.rows();
  const Eigen::Index n = constraint_matrix.cols();
  if (rhs.size() != m || static_cast<Eigen::Index>(row_senses.size()) != m) {
    throw ValidationError("LinearProgram: row count mismatch between matrix (" +
                          std::to_string(m) + "), rhs (" +
                          std::to_string(rhs.size()) + ") and senses (" +
                          std::to_string(row_senses.size()) + ")");
  }
  if (objective.size() != n || lower_bounds.size() != n ||
      upper_bounds.size() != n) {
    throw ValidationError(
        "LinearProgram: column count mismatch between matrix, objective and "
        "bounds");
  }
  if (!constraint_matrix.allFinite() || !rhs.allFinite() ||
      !objective.allFinite()) {
    throw ValidationError("LinearProgram: non-finite coefficient");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(lower_bounds(j)) || std::isnan(upper_bounds(j)) ||
        lower_bounds(j) > upper_bounds(j) || lower_bounds(j) == kInf ||
        upper_bounds(j) == -kInf) {
      throw ValidationError("LinearProgram: invalid bounds on column " +
                            std::to_string(j));
    }
  }
}

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "Optimal";
    case LpStatus::kInfeasible:
      return "Infeasible";
    case LpStatus::kUnbounded:
      return "Unbounded";
    case LpStatus::kIterationLimit:
      return "IterationLimit";
  }
  return "Unknown";
}

namespace {

class SimplexSolver {
 public:
  SimplexSolver(const LinearProgram& lp, const LpOptions& options)
      : lp_(lp),
        opt_(options),
        m_(lp.num_rows()),
        n_(lp.num_cols()),
        total_(m_ + n_),
        abs_matrix_(lp.constraint_matrix.cwiseAbs()) {
    lower_.resize(total_);
    upper_.resize(total_);
    cost_ = Eigen::VectorXd::Zero(total_);
    htol_.resize(total_);
    for (int j = 0; j < n_; ++j) {
      lower_(j) = lp.lower_bounds(j);
      upper_(j) = lp.upper_bounds(j);
      cost_(j) = lp.objective(j);
      double scale = 0.0;
      if (std::isfinite(lower_(j))) scale = std::abs(lower_(j));
      if (std::isfinite(upper_(j))) scale = std::max(scale, std::abs(upper_(j)));
      htol_(j) = 0.5 * opt_.feas_tol * (1.0 + scale);
    }
    for (int i = 0; i < m_; ++i) {
      const int j = n_ + i;
      switch (lp.row_senses[i]) {
        case RowSense::kLessEqual:
          lower_(j) = 0.0;
          upper_(j) = kInf;
          break;
        case RowSense::kGreaterEqual:
          lower_(j) = -kInf;
          upper_(j) = 0.0;
          break;
        case RowSense::kEqual:
          lower_(j) = 0.0;
          upper_(j) = 0.0;
          break;
      }
      htol_(j) = 0.5 * opt_.feas_tol * (1.0 + std::abs(lp.rhs(i)));
    }
    iteration_limit_ = opt_.iteration_limit > 0
                           ? opt_.iteration_limit
                           : std::max(1000, 50 * (m_ + n_));
    bland_threshold_ = 3 * (m_ + n_);
  }

  LpSolution Solve(const LpBasis* warm_start) {
    if (warm_start == nullptr || !LoadBasis(*warm_start)) {
      LoadSlackBasis();
    }
    LpSolution solution;
    solution.status = Iterate();
    Finish(&solution);
    return solution;
  }

 private:
  double NonbasicValue(int j) const {
    switch (status_[j]) {
      case BasisStatus::kAtLower:
        return lower_(j);
      case BasisStatus::kAtUpper:
        return upper_(j);
      default:
        return 0.0;
    }
  }

  BasisStatus DefaultNonbasicStatus(int j) const {
    if (std::isfinite(lower_(j))) return BasisStatus::kAtLower;
    if (std::isfinite(upper_(j))) return BasisStatus::kAtUpper;
    return BasisStatus::kFree;
  }

  void LoadSlackBasis() {
    status_.assign(total_, BasisStatus::kBasic);
    basic_.resize(m_);
    for (int j = 0; j < n_; ++j) status_[j] = DefaultNonbasicStatus(j);
    for (int i = 0; i < m_; ++i) basic_[i] = n_ + i;
    binv_ = Eigen::MatrixXd::Identity(m_, m_);
    updates_ = 0;
    x_ = Eigen::VectorXd::Zero(total_);
    for (int j = 0; j < total_; ++j) {
      if (status_[j] != BasisStatus::kBasic) x_(j) = NonbasicValue(j);
    }
    ComputeBasicValues();
  }

  bool LoadBasis(const LpBasis& basis) {
    if (static_cast<int>(basis.status.size()) != total_) return false;
    std::vector<int> basic;
    for (int j = 0; j < total_; ++j) {
      if (basis.status[j] == BasisStatus::kBasic) basic.push_back(j);
    }
    if (static_cast<int>(basic.size()) != m_) return false;
    status_ = basis.status;
    for (int j = 0; j < total_; ++j) {
      BasisStatus& s = status_[j];
      if (s == BasisStatus::kBasic) continue;
      if ((s == BasisStatus::kAtLower && !std::isfinite(lower_(j))) ||
          (s == BasisStatus::kAtUpper && !std::isfinite(upper_(j))) ||
          (s == BasisStatus::kFree &&
           (std::isfinite(lower_(j)) || std::isfinite(upper_(j))))) {
        s = DefaultNonbasicStatus(j);
      }
    }
    basic_ = std::move(basic);
    x_ = Eigen::VectorXd::Zero(total_);
    for (int j = 0; j < total_; ++j) {
      if (status_[j] != BasisStatus::kBasic) x_(j) = NonbasicValue(j);
    }
    if (!Refactor()) return false;
    ComputeBasicValues();
    return true;
  }

  void AddColumnTo(int j, double scale, Eigen::VectorXd* v) const {
    if (j < n_) {
      v->noalias() += scale * lp_.constraint_matrix.col(j);
    } else {
      (*v)(j - n_) += scale;
    }
  }

  Eigen::VectorXd Ftran(int j) const {
    if (j < n_) return binv_ * lp_.constraint_matrix.col(j);
    return binv_.col(j - n_);
  }

  bool Refactor() {
    Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(m_, m_);
    for (int r = 0; r < m_; ++r) {
      const int j = basic_[r];
      if (j < n_) {
        basis_matrix.col(r) = lp_.constraint_matrix.col(j);
      } else {
        basis_matrix(j - n_, r) = 1.0;
      }
    }
    updates_ = 0;
    if (m_ == 0) {
      binv_.resize(0, 0);
      return true;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_matrix);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) return false;
    binv_ = lu.inverse();
    return binv_.allFinite();
  }

  void ComputeBasicValues() {
    Eigen::VectorXd rhs = lp_.rhs;
    for (int j = 0; j < total_; ++j) {
      if (status_[j] != BasisStatus::kBasic && x_(j) != 0.0) {
        AddColumnTo(j, -x_(j), &rhs);
      }
    }
    const Eigen::VectorXd xb = binv_ * rhs;
    for (int r = 0; r < m_; ++r) x_(basic_[r]) = xb(r);
  }

  // Phase-1 cost of a basic variable: -1 below its lower bound, +1 above its
  // upper bound, 0 inside. Returns the total infeasibility.
  double PhaseOneCosts(Eigen::VectorXd* costs) const {
    costs->setZero(m_);
    double infeasibility = 0.0;
    for (int r = 0; r < m_; ++r) {
      const int j = basic_[r];
      if (x_(j) < lower_(j) - htol_(j)) {
        (*costs)(r) = -1.0;
        infeasibility += lower_(j) - x_(j);
      } else if (x_(j) > upper_(j) + htol_(j)) {
        (*costs)(r) = 1.0;
        infeasibility += x_(j) - upper_(j);
      }
    }
    return infeasibility;
  }

  // Reduced costs of every variable for basic costs `basic_costs` and
  // nonbasic costs `phase_two ? c : 0`.
  void Price(const Eigen::VectorXd& basic_costs, bool phase_two,
             Eigen::VectorXd* y, Eigen::VectorXd* d) const {
    *y = binv_.transpose() * basic_costs;
    d->resize(total_);
    d->head(n_) = -(lp_.constraint_matrix.transpose() * *y);
    d->tail(m_) = -*y;
    if (phase_two) d->head(n_) += cost_.head(n_);
  }

  // Returns the entering variable or -1, with `direction` = +1 to increase.
  // The tolerance on d_j scales with the size of the terms summed into it,
  // so that cancellation noise is never taken for an improving direction.
  int ChooseEntering(const Eigen::VectorXd& d, const Eigen::VectorXd& y,
                     bool phase_two, int* direction) const {
    const Eigen::VectorXd abs_y = y.cwiseAbs();
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < total_; ++j) {
      const BasisStatus s = status_[j];
      if (s == BasisStatus::kBasic || lower_(j) == upper_(j)) continue;
      double magnitude = 1.0;
      if (j < n_) {
        magnitude += abs_matrix_.col(j).dot(abs_y);
        if (phase_two) magnitude += std::abs(cost_(j));
      } else {
        magnitude += abs_y(j - n_);
      }
      const double tol = opt_.opt_tol * magnitude;
      int dir = 0;
      if (d(j) < -tol && s != BasisStatus::kAtUpper) dir = 1;
      if (d(j) > tol && s != BasisStatus::kAtLower) dir = -1;
      if (dir == 0) continue;
      if (bland_) {
        *direction = dir;
        return j;
      }
      const double score = std::abs(d(j));
      if (score > best_score) {
        best_score = score;
        best = j;
        *direction = dir;
      }
    }
    return best;
  }

  struct Step {
    int row = -1;         // pivot row, -1 for a bound flip
    double length = 0.0;
    bool to_upper = false;  // leaving variable's destination bound
  };

  // Ratio test along x_B(t) = x_B + t * rate. Returns false if unbounded.
  bool RatioTest(int entering, const Eigen::VectorXd& rate, Step* step) const {
    const double flip = upper_(entering) - lower_(entering);
    double relaxed = kInf;
    const double ptol = opt_.pivot_tol;
    // Pass 1: the longest step that keeps every basic variable inside its
    // bounds relaxed by htol (Harris). Bland mode uses exact bounds.
    for (int r = 0; r < m_; ++r) {
      const int j = basic_[r];
      const double v = rate(r);
      if (std::abs(v) <= ptol) continue;
      const double slack = bland_ ? 0.0 : htol_(j);
      const double x = x_(j);
      if (x < lower_(j) - htol_(j)) {
        if (v > 0) relaxed = std::min(relaxed, (lower_(j) - x) / v);
      } else if (x > upper_(j) + htol_(j)) {
        if (v < 0) relaxed = std::min(relaxed, (x - upper_(j)) / -v);
      } else if (v < 0 && std::isfinite(lower_(j))) {
        relaxed = std::min(relaxed, (x - lower_(j) + slack) / -v);
      } else if (v > 0 && std::isfinite(upper_(j))) {
        relaxed = std::min(relaxed, (upper_(j) + slack - x) / v);
      }
    }
    if (std::isfinite(flip) && flip <= relaxed) {
      step->row = -1;
      step->length = flip;
      return true;
    }
    if (!std::isfinite(relaxed)) return false;
    // Pass 2: among rows whose exact ratio fits in the relaxed step pick the
    // largest pivot (or the smallest variable index under Bland's rule).
    double best_pivot = 0.0;
    int best_index = total_;
    for (int r = 0; r < m_; ++r) {
      const int j = basic_[r];
      const double v = rate(r);
      if (std::abs(v) <= ptol) continue;
      const double x = x_(j);
      double ratio = kInf;
      bool to_upper = false;
      if (x < lower_(j) - htol_(j)) {
        if (v > 0) ratio = (lower_(j) - x) / v;
      } else if (x > upper_(j) + htol_(j)) {
        if (v < 0) {
          ratio = (x - upper_(j)) / -v;
          to_upper = true;
        }
      } else if (v < 0 && std::isfinite(lower_(j))) {
        ratio = std::max(0.0, (x - lower_(j)) / -v);
      } else if (v > 0 && std::isfinite(upper_(j))) {
        ratio = std::max(0.0, (upper_(j) - x) / v);
        to_upper = true;
      }
      if (ratio > relaxed * (1.0 + 1e-12) + 1e-300) continue;
      const bool better = bland_ ? j < best_index : std::abs(v) > best_pivot;
      if (better) {
        best_pivot = std::abs(v);
        best_index = j;
        step->row = r;
        step->length = ratio;
        step->to_upper = to_upper;
      }
    }
    return step->row >= 0;
  }

  void Pivot(int entering, int direction, const Eigen::VectorXd& alpha,
             const Step& step) {
    const double delta = direction * step.length;
    x_(entering) += delta;
    if (step.row < 0) {
      status_[entering] = direction > 0 ? BasisStatus::kAtUpper
                                        : BasisStatus::kAtLower;
      x_(entering) = NonbasicValue(entering);
      ComputeBasicValues();
      return;
    }
    const int r = step.row;
    const int leaving = basic_[r];
    status_[leaving] =
        step.to_upper ? BasisStatus::kAtUpper : BasisStatus::kAtLower;
    x_(leaving) = NonbasicValue(leaving);
    status_[entering] = BasisStatus::kBasic;
    basic_[r] = entering;
    ++updates_;
    bool refactored = false;
    if (updates_ >= opt_.refactor_interval) {
      refactored = Refactor();
      if (!refactored) singular_ = true;
    }
    if (!refactored) {
      // Eta update of the explicit inverse.
      const double pivot = alpha(r);
      Eigen::RowVectorXd pivot_row = binv_.row(r) / pivot;
      Eigen::VectorXd multipliers = alpha;
      multipliers(r) = 0.0;
      binv_.noalias() -= multipliers * pivot_row;
      binv_.row(r) = pivot_row;
    }
    ComputeBasicValues();
  }

  LpStatus Iterate() {
    Eigen::VectorXd basic_costs, y, d;
    while (true) {
      if (singular_) return LpStatus::kIterationLimit;
      const double infeasibility = PhaseOneCosts(&basic_costs);
      const bool phase_two = infeasibility == 0.0;
      if (phase_two) {
        for (int r = 0; r < m_; ++r) basic_costs(r) = cost_(basic_[r]);
      }
      Price(basic_costs, phase_two, &y, &d);
      int direction = 0;
      const int entering = ChooseEntering(d, y, phase_two, &direction);
      if (entering < 0) {
        // Confirm on a fresh factorization before declaring termination.
        if (updates_ > 0) {
          if (!Refactor()) return LpStatus::kIterationLimit;
          ComputeBasicValues();
          continue;
        }
        return phase_two ? LpStatus::kOptimal : LpStatus::kInfeasible;
      }
      if (iterations_ >= iteration_limit_) return LpStatus::kIterationLimit;
      const Eigen::VectorXd alpha = Ftran(entering);
      const Eigen::VectorXd rate = -direction * alpha;
      Step step;
      if (!RatioTest(entering, rate, &step)) {
        if (phase_two) return LpStatus::kUnbounded;
        return LpStatus::kIterationLimit;
      }
      if (step.row >= 0 && std::abs(alpha(step.row)) < opt_.pivot_tol) {
        if (bland_) return LpStatus::kIterationLimit;
        bland_ = true;
        continue;
      }
      ++iterations_;
      const double before = phase_two ? cost_.dot(x_) : infeasibility;
      Pivot(entering, direction, alpha, step);
      // Steps that do not improve the objective, whether of zero length or
      // lost in rounding, count towards the switch to Bland's rule.
      const double after =
          phase_two ? cost_.dot(x_) : PhaseOneCosts(&basic_costs);
      if (step.length <= 1e-12 ||
          after > before - 1e-12 * (1.0 + std::abs(before))) {
        if (++degenerate_ > bland_threshold_) bland_ = true;
      }
    }
  }

  void Finish(LpSolution* solution) {
    solution->iterations = iterations_;
    solution->used_bland = bland_;
    solution->primal = x_.head(n_);
    Eigen::VectorXd basic_costs(m_);
    for (int r = 0; r < m_; ++r) basic_costs(r) = cost_(basic_[r]);
    Eigen::VectorXd d;
    Price(basic_costs, true, &solution->dual, &d);
    solution->reduced_costs = d.head(n_);
    solution->objective_value = lp_.objective.dot(solution->primal);
    solution->basis.status = status_;
  }

  const LinearProgram& lp_;
  LpOptions opt_;
  int m_;
  int n_;
  int total_;
  Eigen::MatrixXd abs_matrix_;
  Eigen::VectorXd lower_, upper_, cost_, htol_;
  Eigen::VectorXd x_;
  std::vector<BasisStatus> status_;
  std::vector<int> basic_;
  Eigen::MatrixXd binv_;
  int updates_ = 0;
  int iterations_ = 0;
  int iteration_limit_ = 0;
  int degenerate_ = 0;
  int bland_threshold_ = 0;
  bool bland_ = false;
  bool singular_ = false;
};

}  // namespace

LpSolution SolveLp(const LinearProgram& lp, const LpOptions& options,
                   const LpBasis* warm_start) {
  lp.Validate();
  SimplexSolver solver(lp, options);
  return solver.Solve(warm_start);
}

double DualObjective(const LinearProgram& lp, const LpSolution& solution,
                     double opt_tol) {
  const int m = lp.num_rows();
  const int n = lp.num_cols();
  double value = lp.rhs.dot(solution.dual);
  // Adds min over [lo, hi] of d * x; an infinite minimum is tolerated only
  // when |d| is within the optimality tolerance.
  auto add_term = [&](double d, double lo, double hi) {
    if (d > 0) {
      if (std::isfinite(lo)) {
        value += d * lo;
      } else if (d > opt_tol) {
        return false;
      }
    } else if (d < 0) {
      if (std::isfinite(hi)) {
        value += d * hi;
      } else if (d < -opt_tol) {
        return false;
      }
    }
    return true;
  };
  for (int j = 0; j < n; ++j) {
    if (!add_term(solution.reduced_costs(j), lp.lower_bounds(j),
                  lp.upper_bounds(j))) {
      return -kInf;
    }
  }
  for (int i = 0; i < m; ++i) {
    const double d = -solution.dual(i);
    double lo = 0.0, hi = 0.0;
    if (lp.row_senses[i] == RowSense::kLessEqual) hi = kInf;
    if (lp.row_senses[i] == RowSense::kGreaterEqual) lo = -kInf;
    if (!add_term(d, lo, hi)) return -kInf;
  }
  return value;
}

double MaxPrimalViolation(const LinearProgram& lp, const Eigen::VectorXd& x) {
  double worst = 0.0;
  for (int j = 0; j < lp.num_cols(); ++j) {
    worst = std::max(worst, lp.lower_bounds(j) - x(j));
    worst = std::max(worst, x(j) - lp.upper_bounds(j));
  }
  const Eigen::VectorXd activity = lp.constraint_matrix * x;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const double gap = activity(i) - lp.rhs(i);
    double violation = 0.0;
    switch (lp.row_senses[i]) {
      case RowSense::kLessEqual:
        violation = std::max(0.0, gap);
        break;
      case RowSense::kGreaterEqual:
        violation = std::max(0.0, -gap);
        break;
      case RowSense::kEqual:
        violation = std::abs(gap);
        break;
    }
    worst = std::max(worst, violation / (1.0 + std::abs(lp.rhs(i))));
  }
  return worst;
}

bool DualityGapOk(const LinearProgram& lp, const LpSolution& solution,
                  const LpOptions& options) {
  const double dual = DualObjective(lp, solution, options.opt_tol);
  return std::abs(solution.objective_value - dual) <=
         options.duality_gap_tol * (1.0 + std::abs(solution.objective_value));
}

std::string DumpLp(const LinearProgram& lp) {
  std::ostringstream out;
  char buf[64];
  auto num = [&](double v) {
    if (v == kInf) return std::string("        +inf");
    if (v == -kInf) return std::string("        -inf");
    std::snprintf(buf, sizeof(buf), "%12.5g", v);
    return std::string(buf);
  };
  out << "LP " << lp.num_rows() << " rows x " << lp.num_cols() << " cols\n";
  out << "OBJ ";
  for (int j = 0; j < lp.num_cols(); ++j) out << num(lp.objective(j));
  out << "\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    std::snprintf(buf, sizeof(buf), "R%-5d", i);
    out << buf;
    for (int j = 0; j < lp.num_cols(); ++j) {
      out << num(lp.constraint_matrix(i, j));
    }
    const char* sense = lp.row_senses[i] == RowSense::kLessEqual   ? " <= "
                        : lp.row_senses[i] == RowSense::kEqual     ? " == "
                                                                   : " >= ";
    out << sense << num(lp.rhs(i)) << "\n";
  }
  out << "LO  ";
  for (int j = 0; j < lp.num_cols(); ++j) out << num(lp.lower_bounds(j));
  out << "\nUP  ";
  for (int j = 0; j < lp.num_cols(); ++j) out << num(lp.upper_bounds(j));
  out << "\n";
  return out.str();
}

}  // namespace lqs
