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

#include "lqs/dataset.h"

#include <cmath>
#include <numeric>

#include "lqs/errors.h"

namespace lqs {

Dataset Dataset::FromColumns(Eigen::VectorXd y, Eigen::MatrixXd X) {
  Dataset data;
  data.y = std::move(y);
  data.X = std::move(X);
  data.row_ids.resize(data.X.rows());
  std::iota(data.row_ids.begin(), data.row_ids.end(), std::int64_t{0});
  data.Validate();
  return data;
}

void Dataset::Validate() const {
  if (X.rows() < 1 || X.cols() < 1) {
    throw ValidationError("Dataset: need n >= 1 and p >= 1, got n=" +
                          std::to_string(X.rows()) +
                          " p=" + std::to_string(X.cols()));
  }
  if (y.size() != X.rows()) {
    throw ValidationError("Dataset: y has " + std::to_string(y.size()) +
                          " entries but X has " + std::to_string(X.rows()) +
                          " rows");
  }
  if (static_cast<Eigen::Index>(row_ids.size()) != X.rows()) {
    throw ValidationError("Dataset: row_ids length mismatch");
  }
  if (!y.allFinite() || !X.allFinite()) {
    throw ValidationError("Dataset: non-finite entry");
  }
}

Eigen::VectorXd Dataset::Residuals(const Eigen::VectorXd& beta) const {
  if (beta.size() != X.cols()) {
    throw ValidationError("beta has " + std::to_string(beta.size()) +
                          " entries, expected p=" + std::to_string(X.cols()));
  }
  return y - X * beta;
}

Dataset Dataset::Subset(std::span<const int> rows) const {
  Dataset out;
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  out.row_ids.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int i = rows[k];
    if (i < 0 || i >= n()) throw ValidationError("Subset: index out of range");
    out.y(static_cast<Eigen::Index>(k)) = y(i);
    out.X.row(static_cast<Eigen::Index>(k)) = X.row(i);
    out.row_ids.push_back(row_ids[i]);
  }
  return out;
}

bool Dataset::operator==(const Dataset& other) const {
  return y.size() == other.y.size() && X.rows() == other.X.rows() &&
         X.cols() == other.X.cols() && y == other.y && X == other.X &&
         row_ids == other.row_ids;
}

void QuantileSpec::Validate(int n) const {
  if (q < 1 || q > n) {
    throw ValidationError("quantile q=" + std::to_string(q) +
                          " outside [1, " + std::to_string(n) + "]");
  }
}

QuantileSpec QuantileSpec::MaximalBreakdown(int n, int p) {
  return QuantileSpec{n / 2 + (p + 1) / 2};
}

QuantileSpec QuantileSpec::Median(int n) { return QuantileSpec{n - n / 2}; }

void BetaConstraints::Validate(int p) const {
  if (box) {
    if (box->center.size() != p) {
      throw ValidationError("box center has " +
                            std::to_string(box->center.size()) +
                            " entries, expected p=" + std::to_string(p));
    }
    if (!(box->radius >= 0.0) || !std::isfinite(box->radius) ||
        !box->center.allFinite()) {
      throw ValidationError("box radius must be finite and >= 0");
    }
  }
  if (A.rows() > 0 && A.cols() != p) {
    throw ValidationError("polyhedral A has " + std::to_string(A.cols()) +
                          " columns, expected p=" + std::to_string(p));
  }
  if (b.size() != A.rows()) {
    throw ValidationError("polyhedral b length does not match A rows");
  }
}

bool BetaConstraints::Contains(const Eigen::VectorXd& beta, double tol) const {
  if (box && ((beta - box->center).cwiseAbs().array() >
              box->radius + tol * (1.0 + box->radius))
                 .any()) {
    return false;
  }
  if (A.rows() > 0) {
    const Eigen::VectorXd lhs = A * beta;
    for (Eigen::Index i = 0; i < lhs.size(); ++i) {
      if (lhs(i) > b(i) + tol * (1.0 + std::abs(b(i)))) return false;
    }
  }
  return true;
}

const char* FitKindName(FitKind kind) {
  switch (kind) {
    case FitKind::kLeastSquares:
      return "ls";
    case FitKind::kLad:
      return "lad";
    case FitKind::kChebyshev:
      return "cheb";
    case FitKind::kLqs:
      return "lqs";
  }
  return "unknown";
}

}  // namespace lqs
