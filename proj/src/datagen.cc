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

#include "lqs/datagen.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "lqs/errors.h"

namespace lqs {
namespace {

struct ExampleRow {
  const char* name;
  int n;
  int p;
  double pi;
  Scheme scheme;
  int q;
};

constexpr ExampleRow kExamples[] = {
    {"Ex1", 201, 5, 0.4, Scheme::kB, 121},
    {"Ex2", 201, 10, 0.5, Scheme::kB, 101},
    {"Ex3", 501, 5, 0.4, Scheme::kA, 301},
    {"Ex4", 501, 10, 0.4, Scheme::kA, 301},
    {"Ex5", 2001, 10, 0.4, Scheme::kB, 1201},
    {"Ex6", 5001, 10, 0.4, Scheme::kB, 3001},
    {"Ex7", 10001, 20, 0.4, Scheme::kB, 6001},
};

}  // namespace

const char* SchemeName(Scheme scheme) {
  return scheme == Scheme::kA ? "A" : "B";
}

void SyntheticSpec::Validate() const {
  if (p < 1 || n <= p) {
    throw ValidationError("datagen: need n > p >= 1");
  }
  if (!(pi >= 0.0 && pi <= 1.0)) {
    throw ValidationError("datagen: pi must lie in [0, 1]");
  }
  if (!(noise_sd >= 0.0) || !(x_sd >= 0.0) || !std::isfinite(noise_sd) ||
      !std::isfinite(x_sd) || !std::isfinite(shift)) {
    throw ValidationError("datagen: scales must be finite and >= 0");
  }
}

int ContaminationCount(int n, double pi) {
  return std::min(n, static_cast<int>(std::floor(pi * n + 1e-9)));
}

SyntheticData Generate(const SyntheticSpec& spec) {
  spec.Validate();
  const int n = spec.n;
  const int p = spec.p;
  const int offset = spec.intercept ? 1 : 0;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> x_dist(0.0, 1.0);

  Eigen::MatrixXd X(n, p + offset);
  if (spec.intercept) X.col(0).setOnes();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) X(i, offset + j) = spec.x_sd * x_dist(rng);
  }
  Eigen::VectorXd noise(n);
  for (int i = 0; i < n; ++i) noise(i) = spec.noise_sd * x_dist(rng);

  SyntheticData out;
  out.true_beta = Eigen::VectorXd::Ones(p + offset);
  Eigen::VectorXd y = X * out.true_beta + noise;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const int count = ContaminationCount(n, spec.pi);
  const int covariate_count =
      spec.scheme == Scheme::kA ? count : (count + 1) / 2;
  for (int k = 0; k < count; ++k) {
    const int i = order[k];
    out.contaminated_ids.push_back(i);
    if (k < covariate_count) {
      X(i, offset) += spec.shift;
      out.covariate_ids.push_back(i);
    } else {
      y(i) += spec.shift;
      out.response_ids.push_back(i);
    }
  }
  std::sort(out.contaminated_ids.begin(), out.contaminated_ids.end());
  std::sort(out.covariate_ids.begin(), out.covariate_ids.end());
  std::sort(out.response_ids.begin(), out.response_ids.end());
  out.data = Dataset::FromColumns(std::move(y), std::move(X));
  return out;
}

NamedExample GetNamedExample(const std::string& name, int divisor,
                             std::uint64_t seed) {
  if (divisor < 1) throw ValidationError("datagen: divisor must be >= 1");
  // Accept "Ex1" and "Ex-1".
  std::string key = name;
  key.erase(std::remove(key.begin(), key.end(), '-'), key.end());
  for (const ExampleRow& row : kExamples) {
    if (key != row.name) continue;
    NamedExample ex;
    ex.name = row.name;
    ex.divisor = divisor;
    ex.spec.p = row.p;
    ex.spec.pi = row.pi;
    ex.spec.scheme = row.scheme;
    ex.spec.seed = seed;
    int n = row.n;
    int q = row.q;
    if (divisor > 1) {
      n = row.n / divisor;
      if (n % 2 == 0) ++n;
      q = row.q / divisor;
    }
    if (n <= row.p) {
      throw ValidationError("datagen: divisor leaves n <= p for " + ex.name);
    }
    ex.spec.n = n;
    ex.q.q = std::clamp(q, row.p + 1, n);
    return ex;
  }
  throw ValidationError("datagen: unknown example '" + name + "'");
}

std::vector<std::string> NamedExampleNames() {
  std::vector<std::string> names;
  for (const ExampleRow& row : kExamples) names.emplace_back(row.name);
  return names;
}

}  // namespace lqs
