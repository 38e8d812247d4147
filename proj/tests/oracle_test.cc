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

#include <cmath>
#include <string>

#include "gtest/gtest.h"
#include "lqs/errors.h"
#include "lqs/fits.h"
#include "test_util.h"

namespace lqs {
namespace {

using ::lqs::testing::RandomDataset;
using ::lqs::testing::Rng;
using ::lqs::testing::UniformInt;

TEST(BinomialCappedTest, Values) {
  EXPECT_EQ(BinomialCapped(5, 2, 100), 10);
  EXPECT_EQ(BinomialCapped(14, 7, 1 << 20), 3432);
  EXPECT_EQ(BinomialCapped(60, 30, 2'000'000), 2'000'001);
  EXPECT_EQ(BinomialCapped(3, 4, 10), 0);
}

TEST(EnumerateLqsTest, NoiselessDataHasZeroObjective) {
  Rng rng(61);
  Dataset data = RandomDataset(rng, 9, 2);
  data.y = data.X * Eigen::Vector2d(1.5, -3.0);
  for (int i = 0; i < 3; ++i) data.y(i) += 50.0;
  EXPECT_NEAR(EnumerateLqs(data, {6}).objective, 0.0, 1e-9);
}

TEST(EnumerateLqsTest, FullSampleIsChebyshev) {
  Rng rng(62);
  const Dataset data = RandomDataset(rng, 5, 2);
  const std::vector<int> all = {0, 1, 2, 3, 4};
  EXPECT_NEAR(EnumerateLqs(data, {5}).objective,
              ChebyshevFit(data, all).objective, 1e-12);
}

TEST(EnumerateLqsTest, MatchesVertexEnumeration) {
  Rng rng(63);
  for (int trial = 0; trial < 40; ++trial) {
    const int p = UniformInt(rng, 1, 3);
    const int n = UniformInt(rng, p + 2, 10);
    Dataset data = RandomDataset(rng, n, p);
    for (int i = 0; i < n / 3; ++i) data.y(i) += 30.0;
    const int q = UniformInt(rng, p + 1, n);
    const FitResult fit = EnumerateLqs(data, {q});
    const double oracle = testing::VertexLqsOracle(data, q);
    EXPECT_NEAR(fit.objective, oracle, 1e-9 * (1 + oracle));
    EXPECT_EQ(fit.objective, LqsObjective(data, fit.beta, {q}));
  }
}

TEST(EnumerateLqsTest, RefusesLargeInstances) {
  Rng rng(64);
  const Dataset data = RandomDataset(rng, 40, 1);
  try {
    EnumerateLqs(data, {20}, 1000);
    FAIL() << "expected refusal";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("C(40, 20)"), std::string::npos);
  }
}

TEST(EnumerateLqsTest, EquioscillationAtOptimum) {
  // On continuous data at least p + 1 residuals share the optimal level.
  Rng rng(65);
  int ok = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int p = UniformInt(rng, 1, 3);
    const Dataset data = RandomDataset(rng, 10, p);
    const int q = UniformInt(rng, p + 1, 10);
    const FitResult fit = EnumerateLqs(data, {q});
    ok += CountAtLevel(fit.residuals, fit.objective, 1e-7) >= p + 1;
  }
  EXPECT_GE(ok, 28);
}

TEST(GridLqsTest, GridThroughOptimum) {
  const Dataset data = Dataset::FromColumns(
      (Eigen::VectorXd(5) << -1, 1, 5, 9, -20).finished(),
      Eigen::MatrixXd::Ones(5, 1));
  EXPECT_NEAR(EnumerateLqs(data, {2}).objective, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(GridLqs(data, {2}, Eigen::VectorXd::Zero(1), 10.0, 20), 1.0);
}

TEST(GridLqsTest, RefinementAndLipschitzBound) {
  Rng rng(66);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd X(8, 1);
    for (int i = 0; i < 8; ++i) X(i, 0) = testing::Normal(rng);
    const Dataset data =
        Dataset::FromColumns(testing::NormalVector(rng, 8, 2.0), X);
    const QuantileSpec q{5};
    const FitResult exact = EnumerateLqs(data, q);
    const double radius = std::abs(exact.beta(0)) + 1.0;
    const Eigen::VectorXd center = Eigen::VectorXd::Zero(1);
    double previous = kInf;
    for (int res = 10; res <= 640; res *= 2) {
      const double g = GridLqs(data, q, center, radius, res);
      EXPECT_LE(g, previous);
      EXPECT_GE(g, exact.objective - 1e-12);
      const double lipschitz = data.X.rowwise().lpNorm<1>().maxCoeff();
      EXPECT_LE(g - exact.objective, 2.0 * (radius / res) * lipschitz + 1e-12);
      previous = g;
    }
  }
  const Dataset wide = RandomDataset(rng, 8, 3);
  EXPECT_THROW(GridLqs(wide, {4}, Eigen::VectorXd::Zero(3), 1.0, 10),
               ValidationError);
}

}  // namespace
}  // namespace lqs
