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

// Exact LQS solver: the mixed-integer model with SOS-1 pairs and its Big-M
// relaxation, searched by a dedicated branch-and-bound over the indicator
// variables z_i ("sample i is among the q smallest absolute residuals").
//
// Model variables, in column order:
//   gamma >= 0, beta (p, free or boxed), r+ (n), r- (n), mu (n), mu_bar (n),
//   z (n) in {0, 1},
// with, for every sample i,
//   r+_i - r-_i + x_i'beta = y_i
//   r+_i + r-_i - gamma - mu_i + mu_bar_i = 0     (|r_i| - gamma = mu - mu_bar)
//   gamma - mu_bar_i >= 0
//   mu_bar_i - M_u z_i <= 0
//   mu_i + M_l,i z_i <= M_l,i                      (only when M_l,i is finite)
// and sum_i z_i = q, A beta <= b. The SOS-1 pairs are (mu_bar_i, mu_i),
// (r+_i, r-_i) and (z_i, mu_i).
//
// Nodes fix subsets of z. A node's bound is the larger of the LP relaxation
// above (z in [0, 1] unless fixed) and the Chebyshev value of the samples
// fixed to one. Without a box the Big-M constants for mu are infinite and the
// LP bound coincides with the Chebyshev bound, so only the latter is computed.

#ifndef LQS_MIO_H_
#define LQS_MIO_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lqs/dataset.h"
#include "lqs/lp.h"

namespace lqs {

struct MioLayout {
  int n = 0;
  int p = 0;
  int gamma() const { return 0; }
  int beta(int j) const { return 1 + j; }
  int r_plus(int i) const { return 1 + p + i; }
  int r_minus(int i) const { return 1 + p + n + i; }
  int mu(int i) const { return 1 + p + 2 * n + i; }
  int mu_bar(int i) const { return 1 + p + 3 * n + i; }
  int z(int i) const { return 1 + p + 4 * n + i; }
  int num_vars() const { return 1 + p + 5 * n; }
};

struct MioModel {
  Dataset data;
  QuantileSpec q;
  BetaConstraints constraints;
  MioLayout layout;
  std::vector<std::pair<int, int>> sos1_sets;
  Eigen::VectorXd big_m_lower;  // M_l,i; +inf without a box
  double big_m_upper = kInf;    // M_u
  // Big-M relaxation with z in [0, 1]; nodes tighten the z bounds.
  LinearProgram relaxation;
  int sum_z_row = -1;

  bool has_box() const { return constraints.box.has_value(); }
};

// Builds the model. With a box (center b0, radius M), R_i = |y_i - x_i'b0| +
// M ||x_i||_1 bounds |r_i| over the box; then M_l,i = R_i and M_u is
// `upper_bound` when given, else max_i R_i. Without a box M_u is
// `upper_bound` or +inf. Throws ValidationError on dimension mismatches.
MioModel BuildModel(const Dataset& data, QuantileSpec q,
                    const BetaConstraints& constraints = {},
                    std::optional<double> upper_bound = std::nullopt);

// Plain-text listing of the model for debugging.
std::string DumpModel(const MioModel& model);

struct BnbNode {
  std::vector<int> fixed_one;   // sorted
  std::vector<int> fixed_zero;  // sorted
  double bound = 0.0;
  int depth = 0;
  std::int64_t id = 0;
  Eigen::VectorXd beta_hint;  // solution behind `bound`, if known
  LpBasis basis;              // parent LP basis for warm starts
};

struct NodeBound {
  double bound = 0.0;
  double chebyshev_bound = 0.0;
  std::optional<double> lp_bound;
  bool lp_failed = false;
  bool infeasible = false;
  bool exact = false;  // the bound is the subtree optimum
  Eigen::VectorXd beta;       // a feasible beta attaining chebyshev_bound
  Eigen::VectorXd lp_beta;    // beta part of the LP solution, if solved
  Eigen::VectorXd lp_z;       // z part of the LP solution, if solved
  LpBasis basis;
};

// Lower bound on the best objective over all completions of `node`. Leaves
// (|fixed_one| = q, or |fixed_zero| = n - q) are evaluated exactly by a
// Chebyshev fit. Throws ValidationError for an inconsistent node.
NodeBound NodeRelaxation(const MioModel& model, const BnbNode& node);

// Full variable vector of the model at beta: gamma = f_q(beta), z marks the q
// samples with the smallest |r_i| (ties to smaller indices), r+ / r- split r,
// mu = max(|r| - gamma, 0) and mu_bar = max(gamma - |r|, 0).
Eigen::VectorXd ReconstructSolution(const MioModel& model,
                                    const Eigen::VectorXd& beta);

// Largest product over the SOS-1 pairs at `x`.
double MaxSos1Violation(const MioModel& model, const Eigen::VectorXd& x);

struct MioLimits {
  double time_limit_s = std::numeric_limits<double>::infinity();
  std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
  double gap_tol = 1e-6;

  void Validate() const;
};

enum class MioStatus : std::uint8_t {
  kProvedOptimal,
  kTimeLimit,
  kNodeLimit,
  kInfeasible,
};

const char* MioStatusName(MioStatus status);

struct TraceEvent {
  double wall_time_s = 0.0;
  double upper_bound = 0.0;
  double lower_bound = 0.0;
};

struct MioResult {
  Eigen::VectorXd incumbent_beta;  // empty if no incumbent
  double upper_bound = kInf;
  double lower_bound = 0.0;
  double gap = kInf;
  MioStatus status = MioStatus::kTimeLimit;
  std::int64_t nodes_explored = 0;
  double root_bound = 0.0;
  bool warm_start_used = false;
  int lp_failures = 0;
  std::vector<TraceEvent> trace;
  double wall_time_s = 0.0;
};

// (upper - lower) / max(upper, 1e-12), and 0 when both are equal.
double RelativeGap(double upper, double lower);

// Best-bound branch-and-bound. A warm start seeds the incumbent when it
// satisfies the model's constraints; without one the LAD fit (or, under
// constraints, any feasible point) is used. Single-threaded and
// deterministic apart from wall-clock limits.
MioResult Solve(const MioModel& model,
                const std::optional<Eigen::VectorXd>& warm_start,
                const MioLimits& limits);

// As Solve, and writes the trace as CSV (wall_time_s,upper_bound,lower_bound)
// to `trace_path`. Throws IoError when the file cannot be written.
MioResult SolveWithEvolution(const MioModel& model,
                             const std::optional<Eigen::VectorXd>& warm_start,
                             const MioLimits& limits,
                             const std::string& trace_path);

void WriteTraceCsv(const std::vector<TraceEvent>& trace,
                   const std::string& path);

}  // namespace lqs

#endif  // LQS_MIO_H_
