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


#include "lqs/robustness.h"

#include <cmath>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "lqs/errors.h"
#include "test_util.h"

namespace lqs {
namespace {

using ::lqs::testing::RandomDataset;
using ::lqs::testing::Rng;

TEST(PerturbTest, ZeroReplacementsLeaveTheDataAlone) {
  Rng rng(1);
  const Dataset data = RandomDataset(rng, 12, 2);
  std::vector<int> replaced = {99};
  const Dataset out = Perturb(data, 0, 1e6, 3, PerturbFamily::kResponseShift,
                              &replaced);
  EXPECT_TRUE(out.y == data.y);
  EXPECT_TRUE(out.X == data.X);
  EXPECT_TRUE(replaced.empty());
}

TEST(PerturbTest, AllReplacementsTouchEveryRow) {
  Rng rng(2);
  const Dataset data = RandomDataset(rng, 12, 2);
  const Dataset out =
      Perturb(data, 12, 100.0, 3, PerturbFamily::kResponseAndCovariates);
  for (int i = 0; i < 12; ++i) {
    EXPECT_DOUBLE_EQ(out.y(i) - data.y(i), 100.0);
    EXPECT_NEAR(out.X(i, 0) - data.X(i, 0), 100.0 / std::sqrt(2.0), 1e-12);
  }
}

TEST(PerturbTest, ExactlyTheReportedRowsChange) {
  Rng rng(3);
  const Dataset data = RandomDataset(rng, 20, 3);
  std::vector<int> replaced;
  const Dataset out =
      Perturb(data, 6, 1e3, 8, PerturbFamily::kResponseShift, &replaced);
  ASSERT_EQ(replaced.size(), 6u);
  for (int i = 0, k = 0; i < 20; ++i) {
    const bool hit = k < 6 && replaced[k] == i;
    if (hit) ++k;
    EXPECT_EQ(out.y(i) != data.y(i), hit);
  }
  EXPECT_TRUE(out.X == data.X);
  EXPECT_THROW(Perturb(data, 21, 1.0, 0), ValidationError);
  EXPECT_THROW(Perturb(data, 1, NAN, 0), ValidationError);
}

TEST(BreakdownProbeTest, TenSamplesQuantileSeven) {
  Rng rng(4);
  const Dataset data = RandomDataset(rng, 10, 2);
  BreakdownOptions options;
  options.trials = 3;
  options.seed = 9;
  const BreakdownReport report = BreakdownProbe(data, {7}, options);
  EXPECT_EQ(report.breakdown_numerator, 4);
  EXPECT_EQ(report.breakdown_denominator, 10);
  EXPECT_EQ(report.solver, "oracle");
  ASSERT_EQ(report.cases.size(), 6u);
  for (const BreakdownCase& c : report.cases) {
    if (c.m == 3) {
      EXPECT_TRUE(c.bounded) << "trial " << c.trial;
      for (const BreakdownRung& r : c.rungs) {
        EXPECT_LE(r.objective, c.clean_bound * (1 + 1e-9));
      }
    } else {
      ASSERT_EQ(c.m, 4);
      EXPECT_TRUE(c.diverging) << "trial " << c.trial;
      // Four shifted responses force a residual of the order of the shift.
      EXPECT_GT(c.slope, 1e-3);
    }
  }
  EXPECT_TRUE(report.passed);

  const nlohmann::json j = nlohmann::json::parse(BreakdownReportJson(report));
  EXPECT_EQ(j["breakdown"]["numerator"], 4);
  EXPECT_EQ(j["cases"].size(), 6u);
  EXPECT_EQ(j["passed"], true);
}

TEST(BreakdownProbeTest, FractionsOfTheUsualQuantiles) {
  // Maximal breakdown q for n = 201, p = 5 is 103: (201 - 103 + 1) / 201.
  const QuantileSpec qmax = QuantileSpec::MaximalBreakdown(201, 5);
  EXPECT_EQ(201 - qmax.q + 1, 99);
  // The q = 121 used in the first example gives 81 / 201.
  EXPECT_EQ(201 - 121 + 1, 81);
  // The median gives (n - floor(n/2)) so the fraction is floor(n/2) + 1 over n.
  const QuantileSpec med = QuantileSpec::Median(201);
  EXPECT_EQ(201 - med.q + 1, 101);
}

TEST(BreakdownProbeTest, UsesTheMixedIntegerSolverBeyondTheOracle) {
  Rng rng(5);
  const Dataset data = RandomDataset(rng, 30, 2);
  std::string solver;
  const double value = CertifiedOptimum(data, {15}, 30.0, &solver);
  EXPECT_EQ(solver, "mio");
  EXPECT_GT(value, 0.0);
  const Dataset big = RandomDataset(rng, 61, 2);
  EXPECT_THROW(CertifiedOptimum(big, {31}, 1.0), ValidationError);
}

TEST(BreakdownProbeTest, Validation) {
  Rng rng(6);
  const Dataset data = RandomDataset(rng, 8, 1);
  BreakdownOptions options;
  options.magnitudes = {1e6, 1e3};
  EXPECT_THROW(BreakdownProbe(data, {5}, options), ValidationError);
  options.magnitudes = {};
  EXPECT_THROW(BreakdownProbe(data, {5}, options), ValidationError);
  options.magnitudes = {1.0};
  options.trials = 0;
  EXPECT_THROW(BreakdownProbe(data, {5}, options), ValidationError);
}

}  // namespace
}  // namespace lqs
