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

#include "lqs/first_order.h"

#include <cmath>
#include <limits>

#include "lqs/errors.h"
#include "lqs/fits.h"

namespace lqs {

void FirstOrderConfig::Validate() const {
  if (max_iter < 1) throw ValidationError("first-order: max_iter must be >= 1");
  if (step_size && !(*step_size > 0.0 && std::isfinite(*step_size))) {
    throw ValidationError("first-order: step size must be positive");
  }
}

double AutoStepSize(const Dataset& data) {
  const double max_norm = data.X.rowwise().norm().maxCoeff();
  if (max_norm == 0.0) return 1.0;
  return 1.0 / max_norm;
}

Eigen::VectorXd LqsSubdifferential(const Dataset& data,
                                   const Eigen::VectorXd& beta,
                                   QuantileSpec q) {
  q.Validate(data.n());
  const Eigen::VectorXd r = data.Residuals(beta);
  const int i = QuantileSampleIndex(r, q);
  const double sign = r(i) >= 0.0 ? 1.0 : -1.0;
  return -sign * data.X.row(i).transpose();
}

FitResult SubdifferentialDescent(const Dataset& data, QuantileSpec q,
                                 const Eigen::VectorXd& start,
                                 const FirstOrderConfig& config) {
  config.Validate();
  q.Validate(data.n());
  if (start.size() != data.p()) {
    throw ValidationError("first-order: start has wrong length");
  }
  const double step = config.step_size.value_or(AutoStepSize(data));

  FitResult best;
  best.kind = FitKind::kLqs;
  Eigen::VectorXd beta = start;
  double best_value = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= config.max_iter; ++k) {
    const Eigen::VectorXd r = data.Residuals(beta);
    const double value = OrderedAbsResidual(r, q);
    if (config.record_trace) best.trace.push_back(value);
    if (value < best_value) {
      best_value = value;
      best.beta = beta;
      best.residuals = r;
    }
    if (k == config.max_iter) break;
    const int i = QuantileSampleIndex(r, q);
    const double sign = r(i) >= 0.0 ? 1.0 : -1.0;
    // beta - step * (-sgn(r_i) x_i)
    beta += (step * sign) * data.X.row(i).transpose();
  }
  best.objective = best_value;
  best.iterations = config.max_iter;
  return best;
}

}  // namespace lqs
