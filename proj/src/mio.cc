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

#include "lqs/mio.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lqs/errors.h"
#include "lqs/fits.h"

namespace lqs {
namespace {

using Clock = std::chrono::steady_clock;

// Tolerance for accepting heuristic points against the model's constraints.
constexpr double kFeasTol = 1e-8;
// Threshold below which a relaxed z value counts as integral.
constexpr double kIntegralityTol = 1e-6;

void CheckNode(const MioModel& model, const BnbNode& node) {
  const int n = model.layout.n;
  std::vector<char> seen(n, 0);
  for (const std::vector<int>* set : {&node.fixed_one, &node.fixed_zero}) {
    if (!std::is_sorted(set->begin(), set->end())) {
      throw ValidationError("node: fixed index sets must be sorted");
    }
    for (const int i : *set) {
      if (i < 0 || i >= n) throw ValidationError("node: index out of range");
      if (seen[i]++) throw ValidationError("node: index fixed twice");
    }
  }
  if (static_cast<int>(node.fixed_one.size()) > model.q.q ||
      static_cast<int>(node.fixed_zero.size()) > n - model.q.q) {
    throw ValidationError("node: too many fixed indicators");
  }
}

std::vector<int> Complement(int n, const std::vector<int>& sorted) {
  std::vector<int> out;
  out.reserve(n - sorted.size());
  size_t k = 0;
  for (int i = 0; i < n; ++i) {
    if (k < sorted.size() && sorted[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<int> Insert(std::vector<int> sorted, int i) {
  sorted.insert(std::lower_bound(sorted.begin(), sorted.end(), i), i);
  return sorted;
}

NodeBound ChebyshevBound(const MioModel& model, const std::vector<int>& subset,
                         const Eigen::VectorXd& hint) {
  NodeBound nb;
  if (subset.empty() && model.constraints.empty()) {
    nb.chebyshev_bound = 0.0;
    nb.beta = hint.size() == model.layout.p
                  ? hint
                  : Eigen::VectorXd::Zero(model.layout.p);
    return nb;
  }
  std::optional<FitResult> fit =
      ConstrainedChebyshevFit(model.data, subset, model.constraints);
  if (!fit) {
    nb.infeasible = true;
    nb.chebyshev_bound = kInf;
    return nb;
  }
  nb.chebyshev_bound = fit->objective;
  nb.beta = std::move(fit->beta);
  return nb;
}

// Evaluates `node`; `same_subset` may carry the Chebyshev part already
// computed for an identical fixed_one set.
NodeBound Evaluate(const MioModel& model, const BnbNode& node,
                   const NodeBound* same_subset) {
  const int n = model.layout.n;
  const int q = model.q.q;
  const bool one_leaf = static_cast<int>(node.fixed_one.size()) == q;
  const bool zero_leaf = static_cast<int>(node.fixed_zero.size()) == n - q;
  if (one_leaf || zero_leaf) {
    const std::vector<int> subset =
        one_leaf ? node.fixed_one : Complement(n, node.fixed_zero);
    NodeBound nb = ChebyshevBound(model, subset, node.beta_hint);
    nb.exact = true;
    nb.bound = nb.chebyshev_bound;
    return nb;
  }

  NodeBound nb;
  if (same_subset != nullptr) {
    nb.chebyshev_bound = same_subset->chebyshev_bound;
    nb.beta = same_subset->beta;
    nb.infeasible = same_subset->infeasible;
  } else {
    nb = ChebyshevBound(model, node.fixed_one, node.beta_hint);
  }
  if (nb.infeasible) {
    nb.bound = kInf;
    return nb;
  }
  nb.bound = std::max(nb.chebyshev_bound, node.bound);

  if (model.has_box()) {
    LinearProgram lp = model.relaxation;
    const MioLayout& L = model.layout;
    for (const int i : node.fixed_one) lp.lower_bounds(L.z(i)) = 1.0;
    for (const int i : node.fixed_zero) lp.upper_bounds(L.z(i)) = 0.0;
    LpSolution sol =
        SolveLp(lp, {}, node.basis.empty() ? nullptr : &node.basis);
    if (sol.status == LpStatus::kOptimal) {
      nb.lp_bound = sol.objective_value;
      nb.bound = std::max(nb.bound, sol.objective_value);
      nb.lp_beta = sol.primal.segment(L.beta(0), L.p);
      nb.lp_z = sol.primal.segment(L.z(0), n);
      nb.basis = std::move(sol.basis);
    } else if (sol.status == LpStatus::kInfeasible) {
      nb.infeasible = true;
      nb.bound = kInf;
    } else {
      nb.lp_failed = true;
    }
  }
  return nb;
}

// Branching index: most fractional relaxed z, else the unfixed sample with
// the largest |r_i| at the node's Chebyshev solution. Ties to the smallest
// index. Returns -1 if nothing is left to branch on.
int ChooseBranch(const MioModel& model, const BnbNode& node,
                 const NodeBound& nb) {
  const int n = model.layout.n;
  std::vector<char> fixed(n, 0);
  for (const int i : node.fixed_one) fixed[i] = 1;
  for (const int i : node.fixed_zero) fixed[i] = 1;
  if (nb.lp_z.size() == n) {
    int best = -1;
    double best_frac = kIntegralityTol;
    for (int i = 0; i < n; ++i) {
      if (fixed[i]) continue;
      const double frac = std::min(nb.lp_z(i), 1.0 - nb.lp_z(i));
      if (frac > best_frac) {
        best_frac = frac;
        best = i;
      }
    }
    if (best >= 0) return best;
  }
  const Eigen::VectorXd r = model.data.Residuals(nb.beta);
  int best = -1;
  double best_abs = -1.0;
  for (int i = 0; i < n; ++i) {
    if (!fixed[i] && std::abs(r(i)) > best_abs) {
      best_abs = std::abs(r(i));
      best = i;
    }
  }
  return best;
}

struct OpenNode {
  BnbNode node;
  NodeBound eval;
};

struct WorseBound {
  bool operator()(const OpenNode* a, const OpenNode* b) const {
    if (a->eval.bound != b->eval.bound) return a->eval.bound > b->eval.bound;
    return a->node.id > b->node.id;
  }
};

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

MioModel BuildModel(const Dataset& data, QuantileSpec q,
                    const BetaConstraints& constraints,
                    std::optional<double> upper_bound) {
  data.Validate();
  q.Validate(data.n());
  constraints.Validate(data.p());
  if (upper_bound && !(*upper_bound >= 0.0)) {
    throw ValidationError("MIO: upper bound must be >= 0");
  }
  MioModel model;
  model.data = data;
  model.q = q;
  model.constraints = constraints;
  const int n = data.n();
  const int p = data.p();
  MioLayout& L = model.layout;
  L.n = n;
  L.p = p;
  for (int i = 0; i < n; ++i) {
    model.sos1_sets.emplace_back(L.mu_bar(i), L.mu(i));
    model.sos1_sets.emplace_back(L.r_plus(i), L.r_minus(i));
    model.sos1_sets.emplace_back(L.z(i), L.mu(i));
  }

  model.big_m_lower = Eigen::VectorXd::Constant(n, kInf);
  if (constraints.box) {
    const auto& box = *constraints.box;
    const Eigen::VectorXd r = data.Residuals(box.center);
    for (int i = 0; i < n; ++i) {
      model.big_m_lower(i) =
          std::abs(r(i)) + box.radius * data.X.row(i).lpNorm<1>();
    }
    model.big_m_upper = upper_bound.value_or(model.big_m_lower.maxCoeff());
  } else if (upper_bound) {
    model.big_m_upper = *upper_bound;
  }

  LinearProgram& lp = model.relaxation;
  lp = LinearProgram::WithColumns(L.num_vars());
  lp.objective(L.gamma()) = 1.0;
  for (int j = 0; j < p; ++j) {
    if (constraints.box) {
      lp.lower_bounds(L.beta(j)) =
          constraints.box->center(j) - constraints.box->radius;
      lp.upper_bounds(L.beta(j)) =
          constraints.box->center(j) + constraints.box->radius;
    } else {
      lp.lower_bounds(L.beta(j)) = -kInf;
    }
  }
  for (int i = 0; i < n; ++i) lp.upper_bounds(L.z(i)) = 1.0;

  const bool finite_mu = std::isfinite(model.big_m_upper);
  int rows = 3 * n + 1 + static_cast<int>(constraints.A.rows());
  if (finite_mu) rows += n;
  for (int i = 0; i < n; ++i) rows += std::isfinite(model.big_m_lower(i));
  lp.constraint_matrix = Eigen::MatrixXd::Zero(rows, L.num_vars());
  lp.rhs = Eigen::VectorXd::Zero(rows);
  lp.row_senses.assign(rows, RowSense::kEqual);
  int row = 0;
  auto& A = lp.constraint_matrix;
  for (int i = 0; i < n; ++i) {
    A(row, L.r_plus(i)) = 1.0;
    A(row, L.r_minus(i)) = -1.0;
    for (int j = 0; j < p; ++j) A(row, L.beta(j)) = data.X(i, j);
    lp.rhs(row++) = data.y(i);

    A(row, L.r_plus(i)) = 1.0;
    A(row, L.r_minus(i)) = 1.0;
    A(row, L.gamma()) = -1.0;
    A(row, L.mu(i)) = -1.0;
    A(row++, L.mu_bar(i)) = 1.0;

    A(row, L.gamma()) = 1.0;
    A(row, L.mu_bar(i)) = -1.0;
    lp.row_senses[row++] = RowSense::kGreaterEqual;

    if (finite_mu) {
      A(row, L.mu_bar(i)) = 1.0;
      A(row, L.z(i)) = -model.big_m_upper;
      lp.row_senses[row++] = RowSense::kLessEqual;
    }
    if (std::isfinite(model.big_m_lower(i))) {
      A(row, L.mu(i)) = 1.0;
      A(row, L.z(i)) = model.big_m_lower(i);
      lp.rhs(row) = model.big_m_lower(i);
      lp.row_senses[row++] = RowSense::kLessEqual;
    }
  }
  model.sum_z_row = row;
  for (int i = 0; i < n; ++i) A(row, L.z(i)) = 1.0;
  lp.rhs(row++) = q.q;
  for (Eigen::Index k = 0; k < constraints.A.rows(); ++k) {
    for (int j = 0; j < p; ++j) A(row, L.beta(j)) = constraints.A(k, j);
    lp.rhs(row) = constraints.b(k);
    lp.row_senses[row++] = RowSense::kLessEqual;
  }
  return model;
}

std::string DumpModel(const MioModel& model) {
  std::ostringstream out;
  const MioLayout& L = model.layout;
  out << "LQS model n=" << L.n << " p=" << L.p << " q=" << model.q.q << "\n";
  out << "columns: gamma=0 beta=" << L.beta(0) << " r+=" << L.r_plus(0)
      << " r-=" << L.r_minus(0) << " mu=" << L.mu(0)
      << " mu_bar=" << L.mu_bar(0) << " z=" << L.z(0) << "\n";
  out << "M_u " << FormatDouble(model.big_m_upper) << "\nM_l";
  for (int i = 0; i < L.n; ++i) out << " " << FormatDouble(model.big_m_lower(i));
  out << "\nsos1";
  for (const auto& [a, b] : model.sos1_sets) out << " (" << a << "," << b << ")";
  out << "\n" << DumpLp(model.relaxation);
  return out.str();
}

NodeBound NodeRelaxation(const MioModel& model, const BnbNode& node) {
  CheckNode(model, node);
  return Evaluate(model, node, nullptr);
}

Eigen::VectorXd ReconstructSolution(const MioModel& model,
                                    const Eigen::VectorXd& beta) {
  const MioLayout& L = model.layout;
  const Eigen::VectorXd r = model.data.Residuals(beta);
  const double gamma = OrderedAbsResidual(r, model.q);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(L.num_vars());
  x(L.gamma()) = gamma;
  x.segment(L.beta(0), L.p) = beta;
  std::vector<int> order(L.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(r(a)) < std::abs(r(b));
  });
  for (int k = 0; k < model.q.q; ++k) x(L.z(order[k])) = 1.0;
  for (int i = 0; i < L.n; ++i) {
    x(L.r_plus(i)) = std::max(r(i), 0.0);
    x(L.r_minus(i)) = std::max(-r(i), 0.0);
    x(L.mu(i)) = std::max(std::abs(r(i)) - gamma, 0.0);
    x(L.mu_bar(i)) = std::max(gamma - std::abs(r(i)), 0.0);
  }
  return x;
}

double MaxSos1Violation(const MioModel& model, const Eigen::VectorXd& x) {
  double worst = 0.0;
  for (const auto& [a, b] : model.sos1_sets) {
    worst = std::max(worst, std::abs(x(a) * x(b)));
  }
  return worst;
}

void MioLimits::Validate() const {
  if (!(time_limit_s > 0.0)) {
    throw ValidationError("MIO: time limit must be positive");
  }
  if (node_limit < 1) throw ValidationError("MIO: node limit must be >= 1");
  if (!(gap_tol >= 0.0)) throw ValidationError("MIO: gap_tol must be >= 0");
}

const char* MioStatusName(MioStatus status) {
  switch (status) {
    case MioStatus::kProvedOptimal:
      return "ProvedOptimal";
    case MioStatus::kTimeLimit:
      return "TimeLimit";
    case MioStatus::kNodeLimit:
      return "NodeLimit";
    case MioStatus::kInfeasible:
      return "Infeasible";
  }
  return "Unknown";
}

double RelativeGap(double upper, double lower) {
  if (upper == lower) return 0.0;
  if (!std::isfinite(upper)) return kInf;
  return std::max(0.0, (upper - lower) / std::max(upper, 1e-12));
}

MioResult Solve(const MioModel& model,
                const std::optional<Eigen::VectorXd>& warm_start,
                const MioLimits& limits) {
  limits.Validate();
  const auto t0 = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };
  const Dataset& data = model.data;
  const int p = model.layout.p;
  MioResult result;
  double& ub = result.upper_bound;
  double lb = 0.0;

  auto offer = [&](const Eigen::VectorXd& beta) {
    if (beta.size() != p || !model.constraints.Contains(beta, kFeasTol)) {
      return;
    }
    const double value = LqsObjective(data, beta, model.q);
    if (value < ub) {
      ub = value;
      result.incumbent_beta = beta;
    }
  };
  auto record = [&] {
    lb = std::min(lb, ub);
    if (result.trace.empty() || result.trace.back().upper_bound != ub ||
        result.trace.back().lower_bound != lb) {
      result.trace.push_back({elapsed(), ub, lb});
    }
  };

  if (warm_start) {
    if (warm_start->size() != p) {
      throw ValidationError("MIO: warm start has wrong length");
    }
    offer(*warm_start);
    result.warm_start_used = std::isfinite(ub);
  }
  if (!std::isfinite(ub) && model.constraints.empty()) {
    offer(LadFit(data).beta);
  }

  std::int64_t next_id = 0;
  // Binary heap ordered by WorseBound: the front holds the best bound.
  std::vector<std::unique_ptr<OpenNode>> open;
  const auto heap_order = [](const std::unique_ptr<OpenNode>& a,
                             const std::unique_ptr<OpenNode>& b) {
    return WorseBound()(a.get(), b.get());
  };
  double pruned_min = kInf;
  auto prunable = [&](double bound) {
    return bound >= ub - limits.gap_tol * std::max(ub, 1e-12);
  };
  // Evaluates a fresh node, feeds the heuristics and queues it if needed.
  auto process = [&](BnbNode node, NodeBound eval) {
    node.id = next_id++;
    ++result.nodes_explored;
    if (eval.lp_failed) ++result.lp_failures;
    if (eval.infeasible) return;
    if (eval.beta.size() == p) offer(eval.beta);
    if (eval.lp_beta.size() == p) offer(eval.lp_beta);
    if (eval.exact) return;  // the subtree optimum is now <= ub
    if (prunable(eval.bound)) {
      pruned_min = std::min(pruned_min, eval.bound);
      return;
    }
    node.bound = eval.bound;
    open.push_back(std::make_unique<OpenNode>(
        OpenNode{std::move(node), std::move(eval)}));
    std::push_heap(open.begin(), open.end(), heap_order);
  };

  BnbNode root;
  if (result.incumbent_beta.size() == p) root.beta_hint = result.incumbent_beta;
  NodeBound root_eval = Evaluate(model, root, nullptr);
  if (root_eval.infeasible) {
    result.status = MioStatus::kInfeasible;
    result.lower_bound = kInf;
    result.gap = kInf;
    result.nodes_explored = 1;
    result.wall_time_s = elapsed();
    return result;
  }
  result.root_bound = root_eval.bound;
  record();
  process(std::move(root), std::move(root_eval));

  result.status = MioStatus::kProvedOptimal;
  while (true) {
    const double frontier = open.empty() ? kInf : open.front()->eval.bound;
    lb = std::max(lb, std::min({frontier, pruned_min, ub}));
    record();
    if (open.empty() || RelativeGap(ub, lb) <= limits.gap_tol) break;
    if (elapsed() >= limits.time_limit_s) {
      result.status = MioStatus::kTimeLimit;
      break;
    }
    if (result.nodes_explored >= limits.node_limit) {
      result.status = MioStatus::kNodeLimit;
      break;
    }
    std::pop_heap(open.begin(), open.end(), heap_order);
    std::unique_ptr<OpenNode> current = std::move(open.back());
    open.pop_back();
    if (prunable(current->eval.bound)) {
      pruned_min = std::min(pruned_min, current->eval.bound);
      continue;
    }
    const BnbNode& node = current->node;
    const int i = ChooseBranch(model, node, current->eval);
    if (i < 0) continue;  // fully fixed; cannot happen for non-leaf nodes

    BnbNode one;
    one.fixed_one = Insert(node.fixed_one, i);
    one.fixed_zero = node.fixed_zero;
    one.bound = current->eval.bound;
    one.depth = node.depth + 1;
    one.beta_hint = current->eval.beta;
    one.basis = current->eval.basis;
    BnbNode zero;
    zero.fixed_one = node.fixed_one;
    zero.fixed_zero = Insert(node.fixed_zero, i);
    zero.bound = current->eval.bound;
    zero.depth = node.depth + 1;
    zero.beta_hint = current->eval.beta;
    zero.basis = current->eval.basis;
    NodeBound one_eval = Evaluate(model, one, nullptr);
    NodeBound zero_eval = Evaluate(model, zero, &current->eval);
    current.reset();
    process(std::move(one), std::move(one_eval));
    process(std::move(zero), std::move(zero_eval));
  }
  if (result.status == MioStatus::kProvedOptimal && open.empty()) {
    lb = std::max(lb, std::min(pruned_min, ub));
  }
  lb = std::min(lb, ub);
  record();
  result.lower_bound = lb;
  result.gap = RelativeGap(ub, lb);
  if (result.gap <= limits.gap_tol) result.status = MioStatus::kProvedOptimal;
  result.wall_time_s = elapsed();
  return result;
}

void WriteTraceCsv(const std::vector<TraceEvent>& trace,
                   const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open trace file " + path);
  out << "wall_time_s,upper_bound,lower_bound\n";
  for (const TraceEvent& e : trace) {
    out << FormatDouble(e.wall_time_s) << ',' << FormatDouble(e.upper_bound)
        << ',' << FormatDouble(e.lower_bound) << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed writing trace file " + path);
}

MioResult SolveWithEvolution(const MioModel& model,
                             const std::optional<Eigen::VectorXd>& warm_start,
                             const MioLimits& limits,
                             const std::string& trace_path) {
  // Fail before the search if the trace cannot be written.
  {
    std::ofstream probe(trace_path, std::ios::binary);
    if (!probe) throw IoError("cannot open trace file " + trace_path);
  }
  MioResult result = Solve(model, warm_start, limits);
  WriteTraceCsv(result.trace, trace_path);
  return result;
}

}  // namespace lqs
