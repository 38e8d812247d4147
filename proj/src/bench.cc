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


#include "lqs/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "lqs/datagen.h"
#include "lqs/errors.h"
#include "lqs/fits.h"
#include "lqs/mio.h"
#include "lqs/oracle.h"

namespace lqs {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Outcome {
  double objective = 0.0;
  double init_seconds = 0.0;
  double solve_seconds = 0.0;
};

// Runs the algorithms of one instance, caching the shared pieces.
class InstanceRunner {
 public:
  InstanceRunner(const Dataset& data, QuantileSpec q,
                 const BenchOptions& options, std::uint64_t init_seed)
      : data_(data), q_(q), options_(options) {
    init_ = options.init;
    init_.seed = init_seed;
    hybrid_ = options.hybrid;
    hybrid_.threads = options.threads;
  }

  Outcome Run(const std::string& algo) {
    if (algo == "ls") return Timed([&] { return LeastSquaresFit(data_); });
    if (algo == "lad") return Timed([&] { return LadFit(data_); });
    if (algo == "cheb") {
      return Timed([&] {
        std::vector<int> all(data_.n());
        for (int i = 0; i < data_.n(); ++i) all[i] = i;
        return ChebyshevFit(data_, all);
      });
    }
    if (algo == "seqlo") {
      const Clock::time_point t0 = Clock::now();
      const FitResult lad = LadFit(data_);
      const double init = SecondsSince(t0);
      const Clock::time_point t1 = Clock::now();
      const SeqLoResult r =
          SequentialLo(data_, q_, lad.beta, hybrid_.sequential_lo);
      return {r.fit.objective, init, SecondsSince(t1)};
    }
    if (algo == "subgrad") {
      const HybridResult r = DescentOnly(data_, q_, Starts(), hybrid_);
      return {r.fit.objective, starts_seconds_, r.solve_seconds};
    }
    if (algo == "hybrid") {
      const HybridResult& r = HybridRun();
      return {r.fit.objective, starts_seconds_, r.solve_seconds};
    }
    if (algo == "hybrid-large") {
      const HybridResult r = HybridLargeScale(data_, q_, Starts(), hybrid_);
      return {r.fit.objective, starts_seconds_, r.solve_seconds};
    }
    MioLimits limits;
    limits.time_limit_s = options_.mio_time_limit_s;
    if (algo == "mio") {
      const MioResult r = Solve(BuildModel(data_, q_), std::nullopt, limits);
      return {r.upper_bound, 0.0, r.wall_time_s};
    }
    if (algo == "mio-warm") {
      const HybridResult& h = HybridRun();
      const MioResult r = Solve(BuildModel(data_, q_, {}, h.fit.objective),
                                h.fit.beta, limits);
      return {r.upper_bound, starts_seconds_ + h.solve_seconds,
              r.wall_time_s};
    }
    throw ValidationError("bench: unknown algorithm '" + algo + "'");
  }

 private:
  template <typename F>
  Outcome Timed(F fit) {
    const Clock::time_point t0 = Clock::now();
    const FitResult r = fit();
    const double seconds = SecondsSince(t0);
    return {LqsObjective(data_, r.beta, q_), 0.0, seconds};
  }

  const std::vector<Eigen::VectorXd>& Starts() {
    if (!starts_.has_value()) {
      const Clock::time_point t0 = Clock::now();
      starts_ = InitialPoints(data_, q_, init_);
      starts_seconds_ = SecondsSince(t0);
    }
    return *starts_;
  }

  const HybridResult& HybridRun() {
    if (!hybrid_result_.has_value()) {
      hybrid_result_ = Hybrid(data_, q_, Starts(), hybrid_);
    }
    return *hybrid_result_;
  }

  const Dataset& data_;
  QuantileSpec q_;
  const BenchOptions& options_;
  InitStrategy init_;
  HybridOptions hybrid_;
  std::optional<std::vector<Eigen::VectorXd>> starts_;
  double starts_seconds_ = 0.0;
  std::optional<HybridResult> hybrid_result_;
};

}  // namespace

double RelativeAccuracy(double f, double f_star) {
  if (f_star == 0.0) return f == 0.0 ? 0.0 : kInf;
  return (f - f_star) / f_star * 100.0;
}

const std::vector<std::string>& BenchAlgoNames() {
  static const std::vector<std::string> kNames = {
      "lad",    "cheb",         "ls",  "subgrad", "seqlo",
      "hybrid", "hybrid-large", "mio", "mio-warm"};
  return kNames;
}

void BenchOptions::Validate() const {
  if (algos.empty()) throw ValidationError("bench: no algorithms");
  for (const std::string& a : algos) {
    const auto& names = BenchAlgoNames();
    if (std::find(names.begin(), names.end(), a) == names.end()) {
      throw ValidationError("bench: unknown algorithm '" + a + "'");
    }
  }
  if (instances < 1) throw ValidationError("bench: instances < 1");
  if (threads < 1) throw ValidationError("bench: threads < 1");
  if (!(mio_time_limit_s > 0.0)) {
    throw ValidationError("bench: MIO time limit must be positive");
  }
}

BenchReport RunBench(const BenchOptions& options) {
  options.Validate();
  const NamedExample ex = GetNamedExample(options.example, options.divisor, 0);
  options.init.Validate(ex.spec.p);
  BenchReport report;
  report.example = ex.name;
  report.n = ex.spec.n;
  report.p = ex.spec.p;
  report.q = ex.q.q;

  for (int k = 0; k < options.instances; ++k) {
    SyntheticSpec spec = ex.spec;
    spec.seed = DeriveSeed(options.seed, 2 * k);
    const SyntheticData synth = Generate(spec);
    InstanceRunner runner(synth.data, ex.q, options,
                          DeriveSeed(options.seed, 2 * k + 1));
    std::vector<BenchRun> runs;
    double best = kInf;
    for (const std::string& algo : options.algos) {
      const Outcome o = runner.Run(algo);
      BenchRun run;
      run.instance = k;
      run.algo = algo;
      run.objective = o.objective;
      run.init_seconds = o.init_seconds;
      run.solve_seconds = o.solve_seconds;
      runs.push_back(run);
      best = std::min(best, o.objective);
    }
    std::optional<double> oracle;
    if (options.oracle &&
        BinomialCapped(spec.n, ex.q.q, kDefaultSubsetLimit) <=
            kDefaultSubsetLimit) {
      oracle = EnumerateLqs(synth.data, ex.q).objective;
    }
    for (BenchRun& r : runs) {
      r.relative_accuracy = RelativeAccuracy(r.objective, best);
      if (oracle.has_value()) {
        r.oracle_accuracy = RelativeAccuracy(r.objective, *oracle);
      }
      report.runs.push_back(r);
    }
    report.best_objective.push_back(best);
    report.oracle_objective.push_back(oracle);
  }

  const int algos = static_cast<int>(options.algos.size());
  const double count = options.instances;
  for (int a = 0; a < algos; ++a) {
    BenchSummary s;
    s.algo = options.algos[a];
    double sum = 0.0, sum_sq = 0.0, oracle_sum = 0.0;
    bool all_oracle = true;
    for (int k = 0; k < options.instances; ++k) {
      const BenchRun& r = report.runs[k * algos + a];
      sum += r.relative_accuracy;
      sum_sq += r.relative_accuracy * r.relative_accuracy;
      s.mean_init_seconds += r.init_seconds / count;
      s.mean_solve_seconds += r.solve_seconds / count;
      if (r.oracle_accuracy.has_value()) {
        oracle_sum += *r.oracle_accuracy;
      } else {
        all_oracle = false;
      }
    }
    s.mean_accuracy = sum / count;
    if (options.instances > 1) {
      const double var =
          std::max(0.0, (sum_sq - sum * sum / count) / (count - 1));
      s.se_accuracy = std::sqrt(var / count);
    }
    s.mean_total_seconds = s.mean_init_seconds + s.mean_solve_seconds;
    if (all_oracle) s.mean_oracle_accuracy = oracle_sum / count;
    report.summary.push_back(s);
  }
  return report;
}

std::string BenchTableCsv(const BenchReport& report) {
  const bool oracle = !report.summary.empty() &&
                      report.summary.front().mean_oracle_accuracy.has_value();
  std::string out =
      "example,n,p,q,algo,rel_acc_mean,rel_acc_se,init_s,solve_s,total_s";
  if (oracle) out += ",oracle_rel_acc_mean";
  out += '\n';
  for (const BenchSummary& s : report.summary) {
    out += report.example + ',' + std::to_string(report.n) + ',' +
           std::to_string(report.p) + ',' + std::to_string(report.q) + ',' +
           s.algo + ',' + FormatDouble(s.mean_accuracy) + ',' +
           FormatDouble(s.se_accuracy) + ',' +
           FormatDouble(s.mean_init_seconds) + ',' +
           FormatDouble(s.mean_solve_seconds) + ',' +
           FormatDouble(s.mean_total_seconds);
    if (oracle) out += ',' + FormatDouble(*s.mean_oracle_accuracy);
    out += '\n';
  }
  return out;
}

std::string BenchRunsCsv(const BenchReport& report) {
  std::string out =
      "instance,algo,objective,best_objective,rel_acc,init_s,solve_s\n";
  char buf[32];
  for (const BenchRun& r : report.runs) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.objective);
    std::string objective = buf;
    std::snprintf(buf, sizeof(buf), "%.17g", report.best_objective[r.instance]);
    out += std::to_string(r.instance) + ',' + r.algo + ',' + objective + ',' +
           buf + ',' + FormatDouble(r.relative_accuracy) + ',' +
           FormatDouble(r.init_seconds) + ',' + FormatDouble(r.solve_seconds) +
           '\n';
  }
  return out;
}

}  // namespace lqs
