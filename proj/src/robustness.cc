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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "json.hpp"
#include "lqs/errors.h"
#include "lqs/fits.h"
#include "lqs/hybrid.h"
#include "lqs/mio.h"
#include "lqs/oracle.h"

namespace lqs {
namespace {

constexpr int kMaxMioSamples = 60;

}  // namespace

Dataset Perturb(const Dataset& data, int m, double magnitude,
                std::uint64_t seed, PerturbFamily family,
                std::vector<int>* replaced) {
  data.Validate();
  if (m < 0 || m > data.n()) {
    throw ValidationError("perturb: m must lie in [0, n]");
  }
  if (!std::isfinite(magnitude)) {
    throw ValidationError("perturb: magnitude must be finite");
  }
  std::mt19937_64 rng(seed);
  std::vector<int> order(data.n());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> rows(order.begin(), order.begin() + m);
  std::sort(rows.begin(), rows.end());
  Dataset out = data;
  const double x_shift = magnitude / std::sqrt(static_cast<double>(data.p()));
  for (const int i : rows) {
    out.y(i) += magnitude;
    if (family == PerturbFamily::kResponseAndCovariates) {
      out.X.row(i).array() += x_shift;
    }
  }
  if (replaced != nullptr) *replaced = std::move(rows);
  return out;
}

double CertifiedOptimum(const Dataset& data, QuantileSpec q,
                        double time_limit_s, std::string* solver) {
  q.Validate(data.n());
  if (BinomialCapped(data.n(), q.q, kDefaultSubsetLimit) <=
      kDefaultSubsetLimit) {
    if (solver != nullptr) *solver = "oracle";
    return EnumerateLqs(data, q).objective;
  }
  if (data.n() > kMaxMioSamples) {
    throw ValidationError("breakdown: n=" + std::to_string(data.n()) +
                          " is beyond the certified solvers");
  }
  if (solver != nullptr) *solver = "mio";
  InitStrategy init;
  init.runs = 10;
  const HybridResult warm = Hybrid(data, q, init);
  MioLimits limits;
  limits.time_limit_s = time_limit_s;
  const MioResult result =
      Solve(BuildModel(data, q, {}, warm.fit.objective), warm.fit.beta, limits);
  if (result.status != MioStatus::kProvedOptimal) {
    throw NumericalError("breakdown: MIO could not certify the optimum");
  }
  return result.upper_bound;
}

BreakdownReport BreakdownProbe(const Dataset& data, QuantileSpec q,
                               const BreakdownOptions& options) {
  data.Validate();
  q.Validate(data.n());
  if (options.magnitudes.empty() ||
      !std::is_sorted(options.magnitudes.begin(), options.magnitudes.end()) ||
      options.magnitudes.front() <= 0.0) {
    throw ValidationError("breakdown: magnitudes must be positive, increasing");
  }
  if (options.trials < 1) throw ValidationError("breakdown: trials < 1");
  const int n = data.n();
  BreakdownReport report;
  report.n = n;
  report.q = q.q;
  report.breakdown_numerator = n - q.q + 1;
  report.breakdown_denominator = n;
  report.breakdown_fraction = static_cast<double>(n - q.q + 1) / n;
  report.baseline_objective =
      CertifiedOptimum(data, q, options.time_limit_s, &report.solver);
  report.passed = true;

  for (int trial = 0; trial < options.trials; ++trial) {
    const std::uint64_t seed = DeriveSeed(options.seed, trial);
    for (const int m : {n - q.q, n - q.q + 1}) {
      BreakdownCase c;
      c.m = m;
      c.trial = trial;
      for (const double magnitude : options.magnitudes) {
        const Dataset perturbed =
            Perturb(data, m, magnitude, seed, PerturbFamily::kResponseShift,
                    &c.replaced);
        c.rungs.push_back(
            {magnitude, CertifiedOptimum(perturbed, q, options.time_limit_s)});
      }
      double lo = kInf, hi = 0.0;
      for (const BreakdownRung& r : c.rungs) {
        lo = std::min(lo, r.objective);
        hi = std::max(hi, r.objective);
      }
      c.max_drift = (hi - lo) / std::max(hi, 1e-300);
      c.growth = c.rungs.back().objective / std::max(c.rungs.front().objective,
                                                      1e-300);
      c.slope = c.rungs.back().objective / c.rungs.back().magnitude;
      if (m <= n - q.q) {
        // The untouched samples number at least q; any q of them bound the
        // optimum, in particular all of them when m = n - q.
        std::vector<int> untouched;
        for (int i = 0, k = 0; i < n; ++i) {
          if (k < m && c.replaced[k] == i) {
            ++k;
          } else {
            untouched.push_back(i);
          }
        }
        c.clean_bound = ChebyshevFit(data, untouched).objective;
        c.bounded = c.max_drift <= options.drift_tol;
        for (const BreakdownRung& r : c.rungs) {
          c.bounded &= r.objective <= c.clean_bound * (1 + 1e-9) + 1e-12;
        }
        report.passed &= c.bounded;
      } else {
        c.diverging = c.growth >= options.divergence_ratio;
        report.passed &= c.diverging;
      }
      report.cases.push_back(std::move(c));
    }
  }
  return report;
}

std::string BreakdownReportJson(const BreakdownReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["n"] = report.n;
  j["q"] = report.q;
  j["breakdown"] = {{"numerator", report.breakdown_numerator},
                    {"denominator", report.breakdown_denominator},
                    {"fraction", report.breakdown_fraction}};
  j["baseline_objective"] = report.baseline_objective;
  j["solver"] = report.solver;
  nlohmann::ordered_json cases = nlohmann::ordered_json::array();
  for (const BreakdownCase& c : report.cases) {
    nlohmann::ordered_json jc;
    jc["m"] = c.m;
    jc["trial"] = c.trial;
    jc["replaced"] = c.replaced;
    nlohmann::ordered_json rungs = nlohmann::ordered_json::array();
    for (const BreakdownRung& r : c.rungs) {
      rungs.push_back({{"magnitude", r.magnitude}, {"objective", r.objective}});
    }
    jc["rungs"] = rungs;
    if (c.m <= report.n - report.q) {
      jc["clean_bound"] = c.clean_bound;
      jc["max_drift"] = c.max_drift;
      jc["verdict"] = c.bounded ? "bounded" : "not_bounded";
    } else {
      jc["growth"] = c.growth;
      jc["slope"] = c.slope;
      jc["verdict"] = c.diverging ? "diverging" : "not_diverging";
    }
    cases.push_back(jc);
  }
  j["cases"] = cases;
  j["passed"] = report.passed;
  return j.dump(2) + "\n";
}

}  // namespace lqs
