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

#include "lqs/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lqs/errors.h"
#include "lqs/fits.h"

namespace lqs {

std::int64_t BinomialCapped(int n, int k, std::int64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  // Exact running product; c * (n - k + i) / i is integral at every step and
  // c <= cap keeps the 128-bit product in range.
  __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > cap) return cap + 1;
  }
  return static_cast<std::int64_t>(c);
}

FitResult EnumerateLqs(const Dataset& data, QuantileSpec q,
                       std::int64_t subset_limit,
                       const BetaConstraints& constraints) {
  data.Validate();
  q.Validate(data.n());
  const int n = data.n();
  const int k = q.q;
  const std::int64_t count = BinomialCapped(n, k, subset_limit);
  if (count > subset_limit) {
    throw ValidationError("oracle: C(" + std::to_string(n) + ", " +
                          std::to_string(k) + ") exceeds the subset limit " +
                          std::to_string(subset_limit));
  }
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::optional<FitResult> best;
  while (true) {
    std::optional<FitResult> fit =
        ConstrainedChebyshevFit(data, idx, constraints);
    if (!fit) {
      throw ValidationError("oracle: constraints admit no beta");
    }
    if (!best || fit->objective < best->objective) best = std::move(fit);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  best->kind = FitKind::kLqs;
  // The Chebyshev value is an upper bound on f_q at its beta and equal to it
  // at the optimum; report f_q itself.
  best->objective = OrderedAbsResidual(best->residuals, q);
  return *std::move(best);
}

double GridLqs(const Dataset& data, QuantileSpec q,
               const Eigen::VectorXd& center, double radius, int resolution) {
  data.Validate();
  q.Validate(data.n());
  const int p = data.p();
  if (p > 2) throw ValidationError("grid oracle: needs p <= 2");
  if (resolution < 10) throw ValidationError("grid oracle: resolution < 10");
  if (center.size() != p || !(radius >= 0.0)) {
    throw ValidationError("grid oracle: bad box");
  }
  auto coord = [&](int j, int k) {
    return center(j) - radius + 2.0 * radius * k / resolution;
  };
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd beta(p);
  const int second = p == 2 ? resolution : 0;
  for (int a = 0; a <= resolution; ++a) {
    beta(0) = coord(0, a);
    for (int b = 0; b <= second; ++b) {
      if (p == 2) beta(1) = coord(1, b);
      best = std::min(best, LqsObjective(data, beta, q));
    }
  }
  return best;
}

}  // namespace lqs
