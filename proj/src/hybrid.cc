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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "lqs/errors.h"
#include "lqs/fits.h"

namespace lqs {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Calls body(i) for i in [0, count), spread over `threads` workers. Results
// must be written to per-index slots.
void ParallelFor(int count, int threads,
                 const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      try {
        for (int i = t; i < count; i += threads) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread& w : workers) w.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int ArgMin(const std::vector<double>& values) {
  // std::min_element keeps the first minimum.
  return static_cast<int>(std::min_element(values.begin(), values.end()) -
                          values.begin());
}

void CheckStarts(const Dataset& data,
                 const std::vector<Eigen::VectorXd>& starts) {
  if (starts.empty()) throw ValidationError("hybrid: no starting points");
  for (const Eigen::VectorXd& s : starts) {
    if (s.size() != data.p()) {
      throw ValidationError("hybrid: starting point has wrong length");
    }
  }
}

}  // namespace

const char* InitKindName(InitKind kind) {
  switch (kind) {
    case InitKind::kLadPerturbed:
      return "lad";
    case InitKind::kChebSubsample:
      return "cheb";
    case InitKind::kExplicit:
      return "explicit";
  }
  return "unknown";
}

void InitStrategy::Validate(int p) const {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw ValidationError("init: eta must be finite and >= 0");
  }
  if (runs < 1) throw ValidationError("init: runs must be >= 1");
  if (subsamples_per_run < 1) {
    throw ValidationError("init: subsamples_per_run must be >= 1");
  }
  if (kind == InitKind::kExplicit) {
    if (explicit_starts.empty()) {
      throw ValidationError("init: explicit strategy without starts");
    }
    for (const Eigen::VectorXd& s : explicit_starts) {
      if (s.size() != p) throw ValidationError("init: start has wrong length");
    }
  }
}

std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer on the combined value.
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<Eigen::VectorXd> LadPerturbedInit(const Dataset& data,
                                              const InitStrategy& strategy) {
  strategy.Validate(data.p());
  const Eigen::VectorXd lad = LadFit(data).beta;
  std::vector<Eigen::VectorXd> starts = {lad};
  std::mt19937_64 rng(DeriveSeed(strategy.seed, 0));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int run = 1; run < strategy.runs; ++run) {
    Eigen::VectorXd b(data.p());
    for (int j = 0; j < data.p(); ++j) {
      b(j) = lad(j) + strategy.eta * std::abs(lad(j)) * unit(rng);
    }
    starts.push_back(std::move(b));
  }
  return starts;
}

Eigen::VectorXd ChebSubsampleInit(const Dataset& data, QuantileSpec q,
                                  int subsamples, std::uint64_t seed,
                                  int* singular_skipped) {
  q.Validate(data.n());
  const int n = data.n();
  const int p = data.p();
  if (n < p + 1) {
    throw ValidationError("Chebyshev init: need n >= p + 1");
  }
  if (subsamples < 1) {
    throw ValidationError("Chebyshev init: subsamples must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> subset(p + 1);
  Eigen::VectorXd best;
  double best_value = std::numeric_limits<double>::infinity();
  int accepted = 0;
  int skipped = 0;
  const int max_draws = 11 * subsamples;
  for (int draw = 0; draw < max_draws && accepted < subsamples; ++draw) {
    // Partial Fisher-Yates: the first p + 1 entries of pool form the subset.
    for (int k = 0; k <= p; ++k) {
      std::uniform_int_distribution<int> pick(k, n - 1);
      std::swap(pool[k], pool[pick(rng)]);
      subset[k] = pool[k];
    }
    std::sort(subset.begin(), subset.end());
    Eigen::MatrixXd xs(p + 1, p);
    for (int k = 0; k <= p; ++k) xs.row(k) = data.X.row(subset[k]);
    const bool singular = Eigen::FullPivLU<Eigen::MatrixXd>(xs).rank() < p;
    const bool last_chance = best.size() == 0 && draw == max_draws - 1;
    if (singular && !last_chance) {
      ++skipped;
      continue;
    }
    ++accepted;
    const FitResult fit = ChebyshevFit(data, subset);
    const double value = LqsObjective(data, fit.beta, q);
    if (value < best_value) {
      best_value = value;
      best = fit.beta;
    }
  }
  if (singular_skipped != nullptr) *singular_skipped = skipped;
  return best;
}

std::vector<Eigen::VectorXd> InitialPoints(const Dataset& data, QuantileSpec q,
                                           const InitStrategy& strategy) {
  strategy.Validate(data.p());
  switch (strategy.kind) {
    case InitKind::kLadPerturbed:
      return LadPerturbedInit(data, strategy);
    case InitKind::kChebSubsample: {
      std::vector<Eigen::VectorXd> starts;
      for (int run = 0; run < strategy.runs; ++run) {
        starts.push_back(ChebSubsampleInit(data, q, strategy.subsamples_per_run,
                                           DeriveSeed(strategy.seed, run)));
      }
      return starts;
    }
    case InitKind::kExplicit:
      return strategy.explicit_starts;
  }
  return {};
}

HybridResult DescentOnly(const Dataset& data, QuantileSpec q,
                         const std::vector<Eigen::VectorXd>& starts,
                         const HybridOptions& options) {
  CheckStarts(data, starts);
  options.first_order.Validate();
  const auto t0 = Clock::now();
  const int count = static_cast<int>(starts.size());
  std::vector<FitResult> fits(count);
  HybridResult result;
  result.start_objectives.resize(count);
  result.descent_objectives.resize(count);
  ParallelFor(count, options.threads, [&](int i) {
    result.start_objectives[i] = LqsObjective(data, starts[i], q);
    fits[i] = SubdifferentialDescent(data, q, starts[i], options.first_order);
    result.descent_objectives[i] = fits[i].objective;
  });
  result.best_start = ArgMin(result.descent_objectives);
  result.fit = std::move(fits[result.best_start]);
  result.solve_seconds = SecondsSince(t0);
  return result;
}

HybridResult Hybrid(const Dataset& data, QuantileSpec q,
                    const std::vector<Eigen::VectorXd>& starts,
                    const HybridOptions& options) {
  CheckStarts(data, starts);
  options.first_order.Validate();
  options.sequential_lo.Validate();
  const auto t0 = Clock::now();
  const int count = static_cast<int>(starts.size());
  std::vector<FitResult> fits(count);
  HybridResult result;
  result.start_objectives.resize(count);
  result.descent_objectives.resize(count);
  result.final_objectives.resize(count);
  ParallelFor(count, options.threads, [&](int i) {
    result.start_objectives[i] = LqsObjective(data, starts[i], q);
    const FitResult descent =
        SubdifferentialDescent(data, q, starts[i], options.first_order);
    result.descent_objectives[i] = descent.objective;
    fits[i] = SequentialLo(data, q, descent.beta, options.sequential_lo).fit;
    result.final_objectives[i] = fits[i].objective;
  });
  result.sequential_lo_runs = count;
  result.best_start = ArgMin(result.final_objectives);
  result.fit = std::move(fits[result.best_start]);
  result.solve_seconds = SecondsSince(t0);
  return result;
}

HybridResult HybridLargeScale(const Dataset& data, QuantileSpec q,
                              const std::vector<Eigen::VectorXd>& starts,
                              const HybridOptions& options) {
  options.sequential_lo.Validate();
  const auto t0 = Clock::now();
  HybridResult result = DescentOnly(data, q, starts, options);
  result.fit = SequentialLo(data, q, result.fit.beta, options.sequential_lo).fit;
  result.final_objectives = {result.fit.objective};
  result.sequential_lo_runs = 1;
  result.solve_seconds = SecondsSince(t0);
  return result;
}

HybridResult Hybrid(const Dataset& data, QuantileSpec q,
                    const InitStrategy& init, const HybridOptions& options) {
  const auto t0 = Clock::now();
  const std::vector<Eigen::VectorXd> starts = InitialPoints(data, q, init);
  const double init_seconds = SecondsSince(t0);
  HybridResult result = Hybrid(data, q, starts, options);
  result.init_seconds = init_seconds;
  return result;
}

HybridResult HybridLargeScale(const Dataset& data, QuantileSpec q,
                              const InitStrategy& init,
                              const HybridOptions& options) {
  const auto t0 = Clock::now();
  const std::vector<Eigen::VectorXd> starts = InitialPoints(data, q, init);
  const double init_seconds = SecondsSince(t0);
  HybridResult result = HybridLargeScale(data, q, starts, options);
  result.init_seconds = init_seconds;
  return result;
}

}  // namespace lqs
