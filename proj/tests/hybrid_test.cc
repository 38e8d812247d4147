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

#include "lqs/hybrid.h"

#include <cmath>
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "lqs/errors.h"
#include "lqs/fits.h"
#include "test_util.h"

namespace lqs {
namespace {

using ::lqs::testing::ForEachSubset;
using ::lqs::testing::RandomDataset;
using ::lqs::testing::Rng;
using ::lqs::testing::UniformInt;

Dataset Corrupted(Rng& rng, int n, int p, int outliers) {
  Dataset data = RandomDataset(rng, n, p);
  for (int i = 0; i < outliers; ++i) data.y(i) += 100.0;
  return data;
}

TEST(LadPerturbedInitTest, FirstStartIsLadAndOthersInBox) {
  Rng rng(41);
  const Dataset data = Corrupted(rng, 30, 3, 5);
  InitStrategy s;
  s.runs = 20;
  s.seed = 9;
  const std::vector<Eigen::VectorXd> starts = LadPerturbedInit(data, s);
  ASSERT_EQ(starts.size(), 20u);
  const Eigen::VectorXd lad = LadFit(data).beta;
  EXPECT_EQ(starts[0], lad);
  for (const Eigen::VectorXd& b : starts) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_LE(std::abs(b(j) - lad(j)), 2.0 * std::abs(lad(j)) + 1e-15);
    }
  }
  EXPECT_EQ(LadPerturbedInit(data, s), starts);
  s.seed = 10;
  EXPECT_NE(LadPerturbedInit(data, s)[1], starts[1]);
}

TEST(LadPerturbedInitTest, ZeroWidthAndZeroCoordinates) {
  Rng rng(42);
  Dataset data = RandomDataset(rng, 20, 2);
  // Second column zero: its LAD coefficient is zero (minimum-norm vertex).
  InitStrategy s;
  s.runs = 5;
  s.eta = 0.0;
  for (const Eigen::VectorXd& b : LadPerturbedInit(data, s)) {
    EXPECT_EQ(b, LadFit(data).beta);
  }
  data.X.col(1).setZero();
  s.eta = 2.0;
  const std::vector<Eigen::VectorXd> starts = LadPerturbedInit(data, s);
  if (starts[0](1) == 0.0) {
    for (const Eigen::VectorXd& b : starts) EXPECT_EQ(b(1), 0.0);
  }
}

TEST(ChebSubsampleInitTest, SingleSubsetWhenNEqualsPPlusOne) {
  Rng rng(43);
  const Dataset data = RandomDataset(rng, 3, 2);
  const std::vector<int> all = {0, 1, 2};
  const Eigen::VectorXd b = ChebSubsampleInit(data, {2}, 5, 1);
  EXPECT_LE((b - ChebyshevFit(data, all).beta).norm(), 1e-9);
}

TEST(ChebSubsampleInitTest, NoiselessDataGivesZero) {
  Rng rng(44);
  Dataset data = RandomDataset(rng, 15, 2);
  data.y = data.X * Eigen::Vector2d(2.0, -1.0);
  const Eigen::VectorXd b = ChebSubsampleInit(data, {8}, 3, 5);
  EXPECT_NEAR(LqsObjective(data, b, {8}), 0.0, 1e-9);
}

TEST(ChebSubsampleInitTest, ManyDrawsReachSubsetEnumerationMinimum) {
  Rng rng(45);
  const Dataset data = Corrupted(rng, 12, 2, 3);
  const QuantileSpec q{7};
  double oracle = std::numeric_limits<double>::infinity();
  ForEachSubset(12, 3, [&](const std::vector<int>& s) {
    oracle = std::min(oracle, LqsObjective(data, ChebyshevFit(data, s).beta, q));
  });
  const double few = LqsObjective(data, ChebSubsampleInit(data, q, 3, 1), q);
  EXPECT_GE(few, oracle - 1e-12);
  // 2000 independent draws cover all 220 subsets with overwhelming odds.
  const double many = LqsObjective(data, ChebSubsampleInit(data, q, 2000, 1), q);
  EXPECT_NEAR(many, oracle, 1e-9);
}

TEST(ChebSubsampleInitTest, SkipsSingularSubsets) {
  // Rows 0..4 share a single design point, so many subsets are singular.
  Eigen::MatrixXd X(6, 2);
  X << 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 3;
  const Dataset data =
      Dataset::FromColumns((Eigen::VectorXd(6) << 0, 1, 2, 3, 4, 5).finished(), X);
  int skipped = 0;
  const Eigen::VectorXd b = ChebSubsampleInit(data, {4}, 10, 7, &skipped);
  EXPECT_EQ(b.size(), 2);
  EXPECT_GT(skipped, 0);
}

TEST(HybridTest, DominanceChain) {
  Rng rng(46);
  for (int trial = 0; trial < 5; ++trial) {
    const Dataset data = Corrupted(rng, 40, 3, 12);
    const QuantileSpec q{22};
    InitStrategy init;
    init.runs = 6;
    init.seed = trial;
    const std::vector<Eigen::VectorXd> starts = InitialPoints(data, q, init);
    HybridOptions opts;
    opts.first_order.max_iter = 100;
    const HybridResult hybrid = Hybrid(data, q, starts, opts);
    const HybridResult descent = DescentOnly(data, q, starts, opts);
    double best_start = std::numeric_limits<double>::infinity();
    for (const Eigen::VectorXd& s : starts) {
      best_start = std::min(best_start, LqsObjective(data, s, q));
    }
    EXPECT_LE(hybrid.fit.objective, descent.fit.objective);
    EXPECT_LE(descent.fit.objective, best_start);
    for (size_t i = 0; i < starts.size(); ++i) {
      EXPECT_LE(hybrid.final_objectives[i], hybrid.descent_objectives[i]);
    }
    EXPECT_EQ(hybrid.sequential_lo_runs, 6);
  }
}

TEST(HybridTest, FindsGlobalOptimumOnSmallInstance) {
  Rng rng(47);
  for (int trial = 0; trial < 5; ++trial) {
    const Dataset data = Corrupted(rng, 15, 2, 4);
    const QuantileSpec q{9};
    const double opt = testing::VertexLqsOracle(data, q.q);
    InitStrategy init;
    init.kind = InitKind::kChebSubsample;
    init.runs = 10;
    init.seed = trial;
    const HybridResult result = Hybrid(data, q, init);
    EXPECT_NEAR(result.fit.objective, opt, 1e-7 * (1 + opt));
  }
}

TEST(HybridTest, OptimalStartIsKept) {
  Rng rng(48);
  const Dataset data = Corrupted(rng, 12, 2, 3);
  Eigen::VectorXd best;
  const double opt = testing::VertexLqsOracle(data, 7, &best);
  const HybridResult result = Hybrid(data, {7}, std::vector{best});
  EXPECT_NEAR(result.fit.objective, opt, 1e-12 * (1 + opt));
}

TEST(HybridTest, LargeScaleRunsSequentialLoOnce) {
  Rng rng(49);
  const Dataset data = Corrupted(rng, 200, 4, 60);
  const QuantileSpec q{110};
  InitStrategy init;
  init.runs = 8;
  init.seed = 3;
  HybridOptions opts;
  opts.first_order.max_iter = 50;
  const HybridResult large = HybridLargeScale(data, q, init, opts);
  EXPECT_EQ(large.sequential_lo_runs, 1);
  EXPECT_LE(large.fit.objective,
            *std::min_element(large.descent_objectives.begin(),
                              large.descent_objectives.end()));
  init.runs = 1;
  const HybridResult a = HybridLargeScale(data, q, init, opts);
  const HybridResult b = Hybrid(data, q, init, opts);
  EXPECT_EQ(a.fit.beta, b.fit.beta);
}

TEST(HybridTest, ThreadCountDoesNotChangeResult) {
  Rng rng(50);
  const Dataset data = Corrupted(rng, 40, 2, 10);
  InitStrategy init;
  init.runs = 7;
  init.seed = 4;
  HybridOptions one;
  HybridOptions three;
  three.threads = 3;
  const HybridResult a = Hybrid(data, {22}, init, one);
  const HybridResult b = Hybrid(data, {22}, init, three);
  EXPECT_EQ(a.fit.beta, b.fit.beta);
  EXPECT_EQ(a.best_start, b.best_start);
  EXPECT_EQ(a.final_objectives, b.final_objectives);
}

TEST(HybridTest, RejectsBadInput) {
  Rng rng(51);
  const Dataset data = RandomDataset(rng, 10, 2);
  EXPECT_THROW(Hybrid(data, {5}, std::vector<Eigen::VectorXd>{}),
               ValidationError);
  InitStrategy init;
  init.runs = 0;
  EXPECT_THROW(Hybrid(data, {5}, init), ValidationError);
  init.runs = 2;
  init.eta = -1;
  EXPECT_THROW(Hybrid(data, {5}, init), ValidationError);
}

}  // namespace
}  // namespace lqs
