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

// Synthetic contaminated regression data and the named benchmark examples.
//
// Clean data: X with i.i.d. N(0, x_sd^2) entries, beta = ones, y = X beta + e
// with e ~ N(0, noise_sd^2). Then floor(pi n) random samples are contaminated:
//   scheme A: x_i1 += shift;
//   scheme B: the first half (rounded up) as in A, the rest y_i += shift.
// Contamination is applied after y is formed, so scheme A points are leverage
// outliers.

#ifndef LQS_DATAGEN_H_
#define LQS_DATAGEN_H_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lqs/dataset.h"

namespace lqs {

enum class Scheme : std::uint8_t { kA, kB };

const char* SchemeName(Scheme scheme);

struct SyntheticSpec {
  int n = 0;
  int p = 0;
  double pi = 0.0;
  Scheme scheme = Scheme::kA;
  std::uint64_t seed = 0;
  double noise_sd = std::sqrt(10.0);
  double x_sd = 10.0;
  double shift = 1000.0;
  // Prepends a column of ones; the contaminated covariate is then the first
  // Gaussian column and p counts the Gaussian columns only.
  bool intercept = false;

  void Validate() const;
};

struct SyntheticData {
  Dataset data;
  Eigen::VectorXd true_beta;
  std::vector<int> contaminated_ids;  // sorted
  std::vector<int> covariate_ids;     // sorted
  std::vector<int> response_ids;      // sorted
};

// floor(pi n), robust to the representation error of pi.
int ContaminationCount(int n, double pi);

SyntheticData Generate(const SyntheticSpec& spec);

struct NamedExample {
  std::string name;
  SyntheticSpec spec;
  QuantileSpec q;
  int divisor = 1;
};

// Ex1..Ex7 at their native (n, p, pi, scheme, q). A divisor k > 1 gives
// n' = floor(n / k) (plus one if even) and q' = floor(q / k), clamped to
// [p + 1, n']. Throws ValidationError for an unknown name or k < 1.
NamedExample GetNamedExample(const std::string& name, int divisor,
                             std::uint64_t seed);

std::vector<std::string> NamedExampleNames();

}  // namespace lqs

#endif  // LQS_DATAGEN_H_
