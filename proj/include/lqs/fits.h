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

// Classical regression fits and order-statistic utilities on residuals.
//
// Conventions used throughout the library:
//   |r_(1)| <= ... <= |r_(n)|  are the sorted absolute residuals, ties kept
//   in sample-index order;
//   f_q(beta) = |r_(q)|;
//   H_m(beta) = sum_{i=m}^{n} |r_(i)|, the sum of the n - m + 1 largest
//   absolute residuals, so that f_q = H_q - H_{q+1} exactly (H_{n+1} = 0).

#ifndef LQS_FITS_H_
#define LQS_FITS_H_

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "lqs/dataset.h"

namespace lqs {

// Minimizes sum r_i^2. Rank-deficient designs get the minimum-norm solution
// and `rank_deficient` set.
FitResult LeastSquaresFit(const Dataset& data);

// Minimizes sum |r_i| through the LP with residual split r = r+ - r-.
// Throws NumericalError if the LP engine fails.
FitResult LadFit(const Dataset& data);

// Minimizes max_{i in subset} |r_i|. `objective` is t*. Throws
// ValidationError for an empty subset or invalid indices. Residuals are
// reported for all n samples.
FitResult ChebyshevFit(const Dataset& data, std::span<const int> subset);

// As ChebyshevFit, subject to `constraints`. Returns nullopt when the
// constraints admit no beta. An empty subset is allowed here and yields t* = 0
// at some feasible beta.
std::optional<FitResult> ConstrainedChebyshevFit(
    const Dataset& data, std::span<const int> subset,
    const BetaConstraints& constraints);

// q-th smallest absolute value of `residuals`.
double OrderedAbsResidual(const Eigen::VectorXd& residuals, QuantileSpec q);

// f_q(beta) = |r_(q)| at beta.
double LqsObjective(const Dataset& data, const Eigen::VectorXd& beta,
                    QuantileSpec q);

// Index of the sample achieving |r_(q)|; among samples with exactly that
// absolute residual the smallest index is returned.
int QuantileSampleIndex(const Eigen::VectorXd& residuals, QuantileSpec q);

// H_m for the given residuals, 1 <= m <= n + 1 (H_{n+1} = 0).
double TopSum(const Eigen::VectorXd& residuals, int m);

// Number of residuals with |r_i| within tol * (1 + t) of t.
int CountAtLevel(const Eigen::VectorXd& residuals, double t,
                 double tol = 1e-7);

}  // namespace lqs

#endif  // LQS_FITS_H_
