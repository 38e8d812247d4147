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

// Empirical breakdown probes for the optimal LQS objective value: after m
// samples are replaced, the optimum stays bounded when m <= n - q and can be
// driven to infinity when m = n - q + 1.

#ifndef LQS_ROBUSTNESS_H_
#define LQS_ROBUSTNESS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "lqs/dataset.h"

namespace lqs {

enum class PerturbFamily : std::uint8_t {
  kResponseShift,           // y_i += magnitude
  kResponseAndCovariates,   // additionally x_i += magnitude / sqrt(p)
};

// Replaces m samples chosen uniformly without replacement (seeded).
// `replaced`, when given, receives the sorted indices.
Dataset Perturb(const Dataset& data, int m, double magnitude,
                std::uint64_t seed,
                PerturbFamily family = PerturbFamily::kResponseShift,
                std::vector<int>* replaced = nullptr);

// Optimal objective, certified: the subset oracle when C(n, q) is within its
// limit, else the MIO solver, which must prove optimality within
// `time_limit_s`. Throws ValidationError when n > 60 and the oracle is out of
// reach, NumericalError when the MIO run ends uncertified.
double CertifiedOptimum(const Dataset& data, QuantileSpec q,
                        double time_limit_s, std::string* solver = nullptr);

struct BreakdownRung {
  double magnitude = 0.0;
  double objective = 0.0;
};

struct BreakdownCase {
  int m = 0;
  int trial = 0;
  std::vector<int> replaced;
  std::vector<BreakdownRung> rungs;
  double clean_bound = 0.0;  // Chebyshev value of the untouched samples
  bool bounded = false;      // all rungs <= clean_bound and drift small
  double max_drift = 0.0;    // relative spread of the objectives
  double growth = 0.0;       // objective(last) / objective(first)
  double slope = 0.0;        // objective(last) / magnitude(last)
  bool diverging = false;    // growth >= divergence_ratio
};

struct BreakdownReport {
  int n = 0;
  int q = 0;
  int breakdown_numerator = 0;    // n - q + 1
  int breakdown_denominator = 0;  // n
  double breakdown_fraction = 0.0;
  double baseline_objective = 0.0;
  std::string solver;
  std::vector<BreakdownCase> cases;
  bool passed = false;
};

struct BreakdownOptions {
  std::vector<double> magnitudes = {1e3, 1e6, 1e9};
  int trials = 1;
  std::uint64_t seed = 0;
  double drift_tol = 1e-6;
  double divergence_ratio = 1e3;
  double time_limit_s = 60.0;
};

// Runs m = n - q (bounded side) and m = n - q + 1 (diverging side) for each
// trial; the same replacement set is used at every magnitude of a trial.
BreakdownReport BreakdownProbe(const Dataset& data, QuantileSpec q,
                               const BreakdownOptions& options = {});

std::string BreakdownReportJson(const BreakdownReport& report);

}  // namespace lqs

#endif  // LQS_ROBUSTNESS_H_
