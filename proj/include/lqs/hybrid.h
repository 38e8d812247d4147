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

// Multi-start driver: subdifferential descent followed by sequential linear
// optimization from each start, with the LAD-box and Chebyshev-subsample
// initialization schemes.

#ifndef LQS_HYBRID_H_
#define LQS_HYBRID_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lqs/dataset.h"
#include "lqs/first_order.h"
#include "lqs/sequential_lo.h"

namespace lqs {

enum class InitKind : std::uint8_t { kLadPerturbed, kChebSubsample, kExplicit };

const char* InitKindName(InitKind kind);

struct InitStrategy {
  InitKind kind = InitKind::kLadPerturbed;
  double eta = 2.0;
  int runs = 100;
  int subsamples_per_run = 40;
  std::uint64_t seed = 0;
  std::vector<Eigen::VectorXd> explicit_starts;  // kExplicit only

  void Validate(int p) const;
};

// Seed of the stream used by run `index`; a fixed mix of the master seed.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index);

// `runs` vectors, the first being the LAD fit and the rest drawn coordinate-
// wise uniformly from [b_j - eta |b_j|, b_j + eta |b_j|].
std::vector<Eigen::VectorXd> LadPerturbedInit(const Dataset& data,
                                              const InitStrategy& strategy);

// Best of `subsamples_per_run` Chebyshev fits of random (p+1)-subsets, in the
// f_q sense, drawn from the stream seeded by `seed`. Subsets whose design has
// rank below p are redrawn, up to 10 times the number of requested draws.
// `singular_skipped`, when given, receives the number of redraws.
Eigen::VectorXd ChebSubsampleInit(const Dataset& data, QuantileSpec q,
                                  int subsamples, std::uint64_t seed,
                                  int* singular_skipped = nullptr);

// All starting points of a strategy, in run order.
std::vector<Eigen::VectorXd> InitialPoints(const Dataset& data, QuantileSpec q,
                                           const InitStrategy& strategy);

struct HybridOptions {
  FirstOrderConfig first_order;
  SeqLoConfig sequential_lo;
  int threads = 1;
};

struct HybridResult {
  FitResult fit;
  int best_start = 0;
  std::vector<double> start_objectives;    // f_q at each start
  std::vector<double> descent_objectives;  // after subdifferential descent
  std::vector<double> final_objectives;    // after sequential LO, if run
  int sequential_lo_runs = 0;
  double init_seconds = 0.0;
  double solve_seconds = 0.0;
};

// Runs descent then sequential LO from every start and keeps the best final
// objective, ties to the lowest start index.
HybridResult Hybrid(const Dataset& data, QuantileSpec q,
                    const std::vector<Eigen::VectorXd>& starts,
                    const HybridOptions& options = {});
HybridResult Hybrid(const Dataset& data, QuantileSpec q,
                    const InitStrategy& init, const HybridOptions& options = {});

// Runs descent from every start and sequential LO once, from the best
// descent result.
HybridResult HybridLargeScale(const Dataset& data, QuantileSpec q,
                              const std::vector<Eigen::VectorXd>& starts,
                              const HybridOptions& options = {});
HybridResult HybridLargeScale(const Dataset& data, QuantileSpec q,
                              const InitStrategy& init,
                              const HybridOptions& options = {});

// Descent only, best over starts; used as the first-order baseline.
HybridResult DescentOnly(const Dataset& data, QuantileSpec q,
                         const std::vector<Eigen::VectorXd>& starts,
                         const HybridOptions& options = {});

}  // namespace lqs

#endif  // LQS_HYBRID_H_
