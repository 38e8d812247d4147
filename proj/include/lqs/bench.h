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


// Benchmark harness: runs a set of algorithms on seeded instances of a named
// example and reports relative accuracy (f - f*) / f* * 100, where f* is the
// best objective among the compared algorithms on each instance.

#ifndef LQS_BENCH_H_
#define LQS_BENCH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lqs/hybrid.h"

namespace lqs {

// (f - f_star) / f_star * 100. A zero f_star gives 0 when f is zero too and
// +inf otherwise.
double RelativeAccuracy(double f, double f_star);

// Known names: lad, cheb, ls, subgrad, seqlo, hybrid, hybrid-large, mio,
// mio-warm.
const std::vector<std::string>& BenchAlgoNames();

struct BenchOptions {
  std::string example = "Ex1";
  int divisor = 1;
  std::vector<std::string> algos = {"subgrad", "hybrid", "mio-warm"};
  int instances = 20;
  std::uint64_t seed = 0;
  int threads = 1;
  // Starting points shared by subgrad, hybrid and hybrid-large; the seed is
  // replaced per instance.
  InitStrategy init;
  HybridOptions hybrid;
  double mio_time_limit_s = 10.0;
  // Adds the exact optimum when the subset enumeration is small enough.
  bool oracle = false;

  void Validate() const;
};

struct BenchRun {
  int instance = 0;
  std::string algo;
  double objective = 0.0;
  double init_seconds = 0.0;
  double solve_seconds = 0.0;
  double relative_accuracy = 0.0;
  std::optional<double> oracle_accuracy;  // against the exact optimum
};

struct BenchSummary {
  std::string algo;
  double mean_accuracy = 0.0;
  double se_accuracy = 0.0;  // standard error of the mean
  double mean_init_seconds = 0.0;
  double mean_solve_seconds = 0.0;
  double mean_total_seconds = 0.0;
  std::optional<double> mean_oracle_accuracy;
};

struct BenchReport {
  std::string example;
  int n = 0;
  int p = 0;
  int q = 0;
  std::vector<double> best_objective;  // f* per instance
  std::vector<std::optional<double>> oracle_objective;
  std::vector<BenchRun> runs;          // instance-major, algos in order
  std::vector<BenchSummary> summary;   // one per algo, in order
};

BenchReport RunBench(const BenchOptions& options);

// Summary table, one row per algorithm.
std::string BenchTableCsv(const BenchReport& report);
// Every run, one row per (instance, algorithm).
std::string BenchRunsCsv(const BenchReport& report);

}  // namespace lqs

#endif  // LQS_BENCH_H_
