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

// Brute-force global solvers for small instances: the LQS optimum is the
// smallest Chebyshev value over all q-subsets of the samples.

#ifndef LQS_ORACLE_H_
#define LQS_ORACLE_H_

#include <cstdint>

#include <Eigen/Dense>

#include "lqs/dataset.h"

namespace lqs {

inline constexpr std::int64_t kDefaultSubsetLimit = 2'000'000;

// C(n, k), saturated at `cap` + 1 so that callers can compare against a
// limit without overflow.
std::int64_t BinomialCapped(int n, int k, std::int64_t cap);

// Minimum over all q-subsets, in lexicographic order, of the (constrained)
// Chebyshev fit. The first subset attaining the minimum wins. Throws
// ValidationError when C(n, q) exceeds `subset_limit` or the constraints are
// infeasible.
FitResult EnumerateLqs(const Dataset& data, QuantileSpec q,
                       std::int64_t subset_limit = kDefaultSubsetLimit,
                       const BetaConstraints& constraints = {});

// Smallest f_q over the grid with resolution + 1 points per coordinate
// spanning [center - radius, center + radius]. Requires p <= 2 and
// resolution >= 10.
double GridLqs(const Dataset& data, QuantileSpec q,
               const Eigen::VectorXd& center, double radius, int resolution);

}  // namespace lqs

#endif  // LQS_ORACLE_H_
