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

// Fixed-step subdifferential descent on f_q(beta) = |r_(q)|.

#ifndef LQS_FIRST_ORDER_H_
#define LQS_FIRST_ORDER_H_

#include <optional>

#include <Eigen/Dense>

#include "lqs/dataset.h"

namespace lqs {

struct FirstOrderConfig {
  int max_iter = 500;
  // nullopt selects 1 / max_i ||x_i||_2.
  std::optional<double> step_size;
  bool record_trace = false;

  void Validate() const;
};

// 1 / max_i ||x_i||_2.
double AutoStepSize(const Dataset& data);

// -sgn(r_(q)) x_(q), with sgn(0) = +1 and ties on |r_(q)| resolved to the
// smallest sample index.
Eigen::VectorXd LqsSubdifferential(const Dataset& data,
                                   const Eigen::VectorXd& beta, QuantileSpec q);

// Runs max_iter iterates beta_1..beta_max_iter (beta_1 = `start`) and returns
// the best one, not the last. `trace` holds f_q(beta_k) when requested.
FitResult SubdifferentialDescent(const Dataset& data, QuantileSpec q,
                                 const Eigen::VectorXd& start,
                                 const FirstOrderConfig& config = {});

}  // namespace lqs

#endif  // LQS_FIRST_ORDER_H_
