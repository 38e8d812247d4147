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


// Command-line front end: fit, mio, bench, datagen, oracle and breakdown.
// Exit codes: 0 on success, 2 on invalid input or I/O failure, 3 on a
// numerical failure.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lqs/bench.h"
#include "lqs/datagen.h"
#include "lqs/errors.h"
#include "lqs/fits.h"
#include "lqs/hybrid.h"
#include "lqs/io.h"
#include "lqs/mio.h"
#include "lqs/oracle.h"
#include "lqs/robustness.h"
#include "lqs/sequential_lo.h"

namespace lqs {
namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct GlobalFlags {
  std::uint64_t seed = 0;
  int threads = 1;
};

// Writes to `path`, or to stdout when it is empty or "-".
void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    WriteTextFile(path, text);
  }
}

std::vector<int> AllRows(int n) {
  std::vector<int> rows(n);
  for (int i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

// ---------------------------------------------------------------- fit

struct FitFlags {
  std::string algo = "hybrid";
  int q = 0;
  std::string init = "lad";
  int runs = 100;
  double eta = 2.0;
  int subsamples = 40;
  int max_iter = 500;
  double seqlo_tol = 1e-4;
  std::string in;
  std::string out;
};

InitStrategy MakeInit(const FitFlags& f, std::uint64_t seed) {
  InitStrategy init;
  if (f.init == "lad") {
    init.kind = InitKind::kLadPerturbed;
  } else if (f.init == "cheb") {
    init.kind = InitKind::kChebSubsample;
  } else {
    throw ValidationError("--init must be lad or cheb");
  }
  init.runs = f.runs;
  init.eta = f.eta;
  init.subsamples_per_run = f.subsamples;
  init.seed = seed;
  return init;
}

int RunFit(const GlobalFlags& g, const FitFlags& f) {
  const Dataset data = ReadCsv(f.in);
  const QuantileSpec q{f.q};
  q.Validate(data.n());
  HybridOptions options;
  options.threads = g.threads;
  options.first_order.max_iter = f.max_iter;
  options.sequential_lo.tol = f.seqlo_tol;
  options.first_order.Validate();
  options.sequential_lo.Validate();

  nlohmann::ordered_json config;
  config["q"] = f.q;

  const Clock::time_point t0 = Clock::now();
  Eigen::VectorXd beta;
  if (f.algo == "ls") {
    beta = LeastSquaresFit(data).beta;
  } else if (f.algo == "lad") {
    beta = LadFit(data).beta;
  } else if (f.algo == "cheb") {
    beta = ChebyshevFit(data, AllRows(data.n())).beta;
  } else if (f.algo == "seqlo") {
    config["start"] = "lad";
    config["seqlo_tol"] = f.seqlo_tol;
    beta = SequentialLo(data, q, LadFit(data).beta, options.sequential_lo)
               .fit.beta;
  } else if (f.algo == "subgrad" || f.algo == "hybrid" ||
             f.algo == "hybrid-large") {
    const InitStrategy init = MakeInit(f, g.seed);
    init.Validate(data.p());
    config["init"] = f.init;
    config["runs"] = f.runs;
    config["eta"] = f.eta;
    if (f.init == "cheb") config["subsamples"] = f.subsamples;
    config["max_iter"] = f.max_iter;
    if (f.algo != "subgrad") config["seqlo_tol"] = f.seqlo_tol;
    config["threads"] = g.threads;
    const std::vector<Eigen::VectorXd> starts = InitialPoints(data, q, init);
    if (f.algo == "subgrad") {
      beta = DescentOnly(data, q, starts, options).fit.beta;
    } else if (f.algo == "hybrid") {
      beta = Hybrid(data, q, starts, options).fit.beta;
    } else {
      beta = HybridLargeScale(data, q, starts, options).fit.beta;
    }
  } else {
    throw ValidationError("unknown --algo '" + f.algo + "'");
  }
  const double seconds = SecondsSince(t0);

  ResultRecord record;
  record.algo = f.algo;
  record.config = config;
  record.beta = beta;
  record.objective = LqsObjective(data, beta, q);
  record.wall_time_s = seconds;
  record.seed = g.seed;
  Emit(f.out, ResultJsonString(record, data, q));
  return 0;
}

// ---------------------------------------------------------------- mio

struct MioFlags {
  int q = 0;
  std::string warm_start;
  std::string box_center;
  std::optional<double> box_radius;
  double time_limit = 60.0;
  double gap_tol = 1e-6;
  std::optional<std::int64_t> node_limit;
  std::string in;
  std::string out;
  std::string trace;
};

int RunMio(const GlobalFlags& g, const MioFlags& f) {
  const Dataset data = ReadCsv(f.in);
  const QuantileSpec q{f.q};
  q.Validate(data.n());
  if (!(f.time_limit > 0.0)) throw ValidationError("--time-limit must be > 0");
  if (!(f.gap_tol >= 0.0)) throw ValidationError("--gap-tol must be >= 0");

  nlohmann::ordered_json config;
  config["q"] = f.q;
  config["time_limit_s"] = f.time_limit;
  config["gap_tol"] = f.gap_tol;
  if (f.node_limit.has_value()) config["node_limit"] = *f.node_limit;

  std::optional<Eigen::VectorXd> warm;
  std::optional<double> upper_bound;
  if (!f.warm_start.empty()) {
    const ResultRecord w = ReadResultJson(f.warm_start, data.p());
    warm = w.beta;
    upper_bound = LqsObjective(data, w.beta, q);
    config["warm_start"] = w.algo;
  }

  BetaConstraints constraints;
  if (f.box_radius.has_value() != !f.box_center.empty()) {
    throw ValidationError("--box-center and --box-radius go together");
  }
  if (f.box_radius.has_value()) {
    if (!(*f.box_radius >= 0.0)) {
      throw ValidationError("--box-radius must be >= 0");
    }
    Eigen::VectorXd center;
    if (f.box_center == "ls") {
      center = LeastSquaresFit(data).beta;
    } else if (f.box_center == "lad") {
      center = LadFit(data).beta;
    } else {
      center = ReadResultJson(f.box_center, data.p()).beta;
    }
    constraints.box = BetaConstraints::Box{center, *f.box_radius};
    config["box_center"] = std::vector<double>(center.data(),
                                               center.data() + center.size());
    config["box_radius"] = *f.box_radius;
    // A warm start outside the box cannot bound the constrained optimum.
    if (upper_bound.has_value() &&
        (warm.value() - center).lpNorm<Eigen::Infinity>() > *f.box_radius) {
      upper_bound.reset();
    }
  }

  MioLimits limits;
  limits.time_limit_s = f.time_limit;
  limits.gap_tol = f.gap_tol;
  if (f.node_limit.has_value()) limits.node_limit = *f.node_limit;
  const MioModel model = BuildModel(data, q, constraints, upper_bound);
  const MioResult result =
      f.trace.empty() ? Solve(model, warm, limits)
                      : SolveWithEvolution(model, warm, limits, f.trace);
  if (result.status == MioStatus::kInfeasible) {
    throw ValidationError("mio: the constraints admit no beta");
  }

  ResultRecord record;
  record.algo = "mio";
  record.config = config;
  record.beta = result.incumbent_beta;
  record.objective = result.upper_bound;
  record.bounds = ResultBounds{result.upper_bound, result.lower_bound,
                               result.gap};
  record.status = MioStatusName(result.status);
  record.nodes = result.nodes_explored;
  record.wall_time_s = result.wall_time_s;
  record.seed = g.seed;
  Emit(f.out, ResultJsonString(record, data, q));
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchFlags {
  std::string example = "Ex1";
  int scale = 1;
  std::string algos = "subgrad,hybrid,mio-warm";
  int instances = 20;
  int runs = 100;
  double mio_time_limit = 10.0;
  bool oracle = false;
  std::string out;
  std::string runs_out;
};

std::vector<std::string> SplitList(const std::string& list) {
  std::vector<std::string> items;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

int RunBenchCommand(const GlobalFlags& g, const BenchFlags& f) {
  BenchOptions options;
  options.example = f.example;
  options.divisor = f.scale;
  options.algos = SplitList(f.algos);
  options.instances = f.instances;
  options.seed = g.seed;
  options.threads = g.threads;
  options.init.runs = f.runs;
  options.mio_time_limit_s = f.mio_time_limit;
  options.oracle = f.oracle;
  const BenchReport report = RunBench(options);
  Emit(f.out, BenchTableCsv(report));
  if (!f.runs_out.empty()) WriteTextFile(f.runs_out, BenchRunsCsv(report));
  return 0;
}

// ---------------------------------------------------------------- datagen

struct DatagenFlags {
  std::string example;
  int scale = 1;
  int n = 0;
  int p = 0;
  double pi = 0.0;
  std::string scheme = "A";
  std::optional<double> x_sd;
  std::optional<double> noise_sd;
  bool intercept = false;
  std::string out;
  std::string meta;
};

int RunDatagen(const GlobalFlags& g, const DatagenFlags& f) {
  SyntheticSpec spec;
  std::optional<int> q;
  if (!f.example.empty()) {
    const NamedExample ex = GetNamedExample(f.example, f.scale, g.seed);
    spec = ex.spec;
    q = ex.q.q;
  } else {
    spec.n = f.n;
    spec.p = f.p;
    spec.pi = f.pi;
    if (f.scheme == "A") {
      spec.scheme = Scheme::kA;
    } else if (f.scheme == "B") {
      spec.scheme = Scheme::kB;
    } else {
      throw ValidationError("--scheme must be A or B");
    }
    spec.seed = g.seed;
  }
  if (f.x_sd.has_value()) spec.x_sd = *f.x_sd;
  if (f.noise_sd.has_value()) spec.noise_sd = *f.noise_sd;
  spec.intercept = f.intercept;
  const SyntheticData synth = Generate(spec);
  Emit(f.out, CsvString(synth.data));
  if (!f.meta.empty()) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    if (!f.example.empty()) j["example"] = f.example;
    j["n"] = spec.n;
    j["p"] = synth.data.p();
    j["pi"] = spec.pi;
    j["scheme"] = SchemeName(spec.scheme);
    j["seed"] = spec.seed;
    j["x_sd"] = spec.x_sd;
    j["noise_sd"] = spec.noise_sd;
    j["shift"] = spec.shift;
    j["intercept"] = spec.intercept;
    if (q.has_value()) j["q"] = *q;
    j["true_beta"] = std::vector<double>(
        synth.true_beta.data(),
        synth.true_beta.data() + synth.true_beta.size());
    j["contaminated_ids"] = synth.contaminated_ids;
    j["covariate_ids"] = synth.covariate_ids;
    j["response_ids"] = synth.response_ids;
    WriteTextFile(f.meta, j.dump(2) + "\n");
  }
  return 0;
}

// ---------------------------------------------------------------- oracle

struct OracleFlags {
  int q = 0;
  std::string in;
  std::string out;
};

int RunOracle(const GlobalFlags& g, const OracleFlags& f) {
  const Dataset data = ReadCsv(f.in);
  const QuantileSpec q{f.q};
  q.Validate(data.n());
  const Clock::time_point t0 = Clock::now();
  const FitResult fit = EnumerateLqs(data, q);
  ResultRecord record;
  record.algo = "oracle";
  record.config["q"] = f.q;
  record.config["subsets"] = BinomialCapped(data.n(), f.q, kDefaultSubsetLimit);
  record.beta = fit.beta;
  record.objective = fit.objective;
  record.wall_time_s = SecondsSince(t0);
  record.seed = g.seed;
  Emit(f.out, ResultJsonString(record, data, q));
  return 0;
}

// ---------------------------------------------------------------- breakdown

struct BreakdownFlags {
  int q = 0;
  std::vector<double> magnitudes = {1e3, 1e6, 1e9};
  int trials = 1;
  double time_limit = 60.0;
  std::string in;
  std::string out;
};

int RunBreakdown(const GlobalFlags& g, const BreakdownFlags& f) {
  const Dataset data = ReadCsv(f.in);
  BreakdownOptions options;
  options.magnitudes = f.magnitudes;
  options.trials = f.trials;
  options.seed = g.seed;
  options.time_limit_s = f.time_limit;
  const BreakdownReport report = BreakdownProbe(data, {f.q}, options);
  Emit(f.out, BreakdownReportJson(report));
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Least quantile of squares regression"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--seed", g.seed, "Master random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  FitFlags fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Heuristic and classical fits");
  fit_cmd->add_option("--algo", fit.algo)
      ->check(CLI::IsMember({"lad", "cheb", "ls", "subgrad", "seqlo", "hybrid",
                             "hybrid-large"}))
      ->capture_default_str();
  fit_cmd->add_option("--q", fit.q, "Order statistic, 1 <= q <= n")
      ->required();
  fit_cmd->add_option("--init", fit.init, "Starting points: lad or cheb")
      ->capture_default_str();
  fit_cmd->add_option("--runs", fit.runs, "Number of starting points")
      ->capture_default_str();
  fit_cmd->add_option("--eta", fit.eta, "LAD perturbation scale")
      ->capture_default_str();
  fit_cmd->add_option("--subsamples", fit.subsamples,
                      "Chebyshev subsamples per start")
      ->capture_default_str();
  fit_cmd->add_option("--max-iter", fit.max_iter, "Descent iterations")
      ->capture_default_str();
  fit_cmd->add_option("--seqlo-tol", fit.seqlo_tol,
                      "Relative stopping tolerance of the LP sequence")
      ->capture_default_str();
  fit_cmd->add_option("--in", fit.in, "Input CSV")->required();
  fit_cmd->add_option("--out", fit.out, "Output result.json (default stdout)");

  MioFlags mio;
  CLI::App* mio_cmd = app.add_subcommand("mio", "Mixed-integer branch and bound");
  mio_cmd->add_option("--q", mio.q)->required();
  mio_cmd->add_option("--warm-start", mio.warm_start, "result.json to seed");
  mio_cmd->add_option("--box-center", mio.box_center,
                      "ls, lad or a result.json whose beta is the center");
  mio_cmd->add_option("--box-radius", mio.box_radius, "Box half-width");
  mio_cmd->add_option("--time-limit", mio.time_limit)->capture_default_str();
  mio_cmd->add_option("--gap-tol", mio.gap_tol)->capture_default_str();
  mio_cmd->add_option("--node-limit", mio.node_limit);
  mio_cmd->add_option("--in", mio.in)->required();
  mio_cmd->add_option("--out", mio.out);
  mio_cmd->add_option("--trace", mio.trace, "Bound evolution CSV");

  BenchFlags bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Relative accuracy on named examples");
  bench_cmd->add_option("--example", bench.example)->capture_default_str();
  bench_cmd->add_option("--scale", bench.scale, "Size divisor")
      ->capture_default_str();
  bench_cmd->add_option("--algos", bench.algos, "Comma-separated list")
      ->capture_default_str();
  bench_cmd->add_option("--instances", bench.instances)->capture_default_str();
  bench_cmd->add_option("--runs", bench.runs, "Starting points per instance")
      ->capture_default_str();
  bench_cmd->add_option("--mio-time-limit", bench.mio_time_limit)
      ->capture_default_str();
  bench_cmd->add_flag("--oracle", bench.oracle,
                      "Add the exact optimum when enumeration is small");
  bench_cmd->add_option("--out", bench.out, "Summary table CSV");
  bench_cmd->add_option("--runs-out", bench.runs_out, "Per-run CSV");

  DatagenFlags gen;
  CLI::App* gen_cmd = app.add_subcommand("datagen", "Synthetic data");
  gen_cmd->add_option("--example", gen.example, "Ex1..Ex7");
  gen_cmd->add_option("--scale", gen.scale)->capture_default_str();
  gen_cmd->add_option("--n", gen.n);
  gen_cmd->add_option("--p", gen.p);
  gen_cmd->add_option("--pi", gen.pi);
  gen_cmd->add_option("--scheme", gen.scheme)->capture_default_str();
  gen_cmd->add_option("--x-sd", gen.x_sd);
  gen_cmd->add_option("--noise-sd", gen.noise_sd);
  gen_cmd->add_flag("--intercept", gen.intercept);
  gen_cmd->add_option("--out", gen.out, "Output CSV (default stdout)");
  gen_cmd->add_option("--meta", gen.meta, "Metadata JSON");

  OracleFlags oracle;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Exact optimum by subset enumeration");
  oracle_cmd->add_option("--q", oracle.q)->required();
  oracle_cmd->add_option("--in", oracle.in)->required();
  oracle_cmd->add_option("--out", oracle.out);

  BreakdownFlags breakdown;
  CLI::App* breakdown_cmd =
      app.add_subcommand("breakdown", "Breakdown probe of the optimum");
  breakdown_cmd->add_option("--q", breakdown.q)->required();
  breakdown_cmd->add_option("--magnitudes", breakdown.magnitudes)
      ->delimiter(',');
  breakdown_cmd->add_option("--trials", breakdown.trials)
      ->capture_default_str();
  breakdown_cmd->add_option("--time-limit", breakdown.time_limit)
      ->capture_default_str();
  breakdown_cmd->add_option("--in", breakdown.in)->required();
  breakdown_cmd->add_option("--out", breakdown.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*fit_cmd) return RunFit(g, fit);
    if (*mio_cmd) return RunMio(g, mio);
    if (*bench_cmd) return RunBenchCommand(g, bench);
    if (*gen_cmd) return RunDatagen(g, gen);
    if (*oracle_cmd) return RunOracle(g, oracle);
    if (*breakdown_cmd) return RunBreakdown(g, breakdown);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitValidation;
}

}  // namespace
}  // namespace lqs

int main(int argc, char** argv) { return lqs::Main(argc, argv); }
