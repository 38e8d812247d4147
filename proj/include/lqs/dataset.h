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

#ifndef LQS_DATASET_H_
#define LQS_DATASET_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lqs {

// Samples (y_i, x_i). An intercept, when wanted, is an explicit column of
// ones in X.
struct Dataset {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::vector<std::int64_t> row_ids;

  // Builds a dataset with row ids 0..n-1 and validates it.
  static Dataset FromColumns(Eigen::VectorXd y, Eigen::MatrixXd X);

  int n() const { return static_cast<int>(X.rows()); }
  int p() const { return static_cast<int>(X.cols()); }

  // Throws ValidationError unless n >= 1, p >= 1, sizes agree and every
  // entry is finite.
  void Validate() const;

  // r = y - X beta.
  Eigen::VectorXd Residuals(const Eigen::VectorXd& beta) const;

  // Rows `rows` in the given order; row ids are carried over.
  Dataset Subset(std::span<const int> rows) const;

  bool operator==(const Dataset& other) const;
};

// Order statistic index q of the absolute residuals, 1-based.
struct QuantileSpec {
  int q = 1;

  // Throws ValidationError unless 1 <= q <= n.
  void Validate(int n) const;

  // floor(n/2) + floor((p+1)/2): the choice with maximal breakdown.
  static QuantileSpec MaximalBreakdown(int n, int p);
  // q = n - floor(n/2), the median order statistic used for LMS.
  static QuantileSpec Median(int n);
};

// Optional side constraints on beta: a box ||beta - center||_inf <= radius and
// polyhedral rows A beta <= b. The box is kept separately because it also
// drives the big-M constants of the mixed-integer model.
struct BetaConstraints {
  struct Box {
    Eigen::VectorXd center;
    double radius = 0.0;
  };
  std::optional<Box> box;
  Eigen::MatrixXd A;  // m x p, may have zero rows
  Eigen::VectorXd b;

  bool empty() const { return !box.has_value() && A.rows() == 0; }
  void Validate(int p) const;
  // True when beta satisfies the box and the rows up to `tol`.
  bool Contains(const Eigen::VectorXd& beta, double tol = 1e-9) const;
};

enum class FitKind : std::uint8_t { kLeastSquares, kLad, kChebyshev, kLqs };

const char* FitKindName(FitKind kind);

struct FitResult {
  Eigen::VectorXd beta;
  Eigen::VectorXd residuals;
  double objective = 0.0;
  FitKind kind = FitKind::kLqs;
  std::vector<double> trace;  // per-iteration objective, when recorded
  int iterations = 0;
  bool rank_deficient = false;
};

}  // namespace lqs

#endif  // LQS_DATASET_H_
