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


// Acceptance suite. Prints one PASS or FAIL line per criterion with the
// measured numbers and exits nonzero if any criterion fails. Reference values
// come from brute-force oracles in test_util.h that do not use the library's
// LP engine, or from the subset enumeration oracle where the criterion names
// it.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lqs/bench.h"
#include "lqs/datagen.h"
#include "lqs/first_order.h"
#include "lqs/fits.h"
#include "lqs/hybrid.h"
#include "lqs/io.h"
#include "lqs/lp.h"
#include "lqs/mio.h"
#include "lqs/oracle.h"
#include "lqs/robustness.h"
#include "lqs/sequential_lo.h"
#include "test_util.h"

namespace lqs {
namespace {

using ::lqs::testing::NormalVector;
using ::lqs::testing::RandomDataset;
using ::lqs::testing::RandomSolvableLp;
using ::lqs::testing::Rng;
using ::lqs::testing::Uniform;
using ::lqs::testing::UniformInt;
using ::lqs::testing::VertexEnumerationMin;
using ::lqs::testing::VertexLqsOracle;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string Format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

double RelErr(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
}

// Mixed scheme A/B instances with a random contamination level; responses of
// the magnitude of the shift are kept, so the instances are far from noise
// only.
Dataset SmallSchemeInstance(Rng& rng, int n, int p, int index) {
  SyntheticSpec spec;
  spec.n = n;
  spec.p = p;
  spec.pi = Uniform(rng, 0.0, 0.4);
  spec.scheme = index % 2 == 0 ? Scheme::kA : Scheme::kB;
  spec.seed = rng();
  return Generate(spec).data;
}

Verdict OracleEquivalence() {
  Rng rng(1001);
  constexpr int kInstances = 200;
  int matched = 0;
  int cross_checked = 0;
  double worst = 0.0;
  for (int k = 0; k < kInstances; ++k) {
    const int n = UniformInt(rng, 6, 14);
    const int p = UniformInt(rng, 1, 3);
    const int q = UniformInt(rng, p + 1, n);
    const Dataset data = SmallSchemeInstance(rng, n, p, k);
    const double oracle = EnumerateLqs(data, {q}).objective;
    // The enumeration oracle itself is cross-checked against the vertex
    // oracle, which solves no LP.
    if (RelErr(oracle, VertexLqsOracle(data, q)) <= 1e-6 ||
        std::abs(oracle - VertexLqsOracle(data, q)) <= 1e-9) {
      ++cross_checked;
    }
    MioLimits limits;
    limits.time_limit_s = 120.0;
    limits.gap_tol = 1e-9;
    const MioResult r = Solve(BuildModel(data, {q}), std::nullopt, limits);
    const double err = std::abs(r.upper_bound - oracle) /
                       std::max(std::abs(oracle), 1e-12);
    const bool ok = r.status == MioStatus::kProvedOptimal &&
                    (err <= 1e-6 || std::abs(r.upper_bound - oracle) <= 1e-9);
    if (ok) ++matched;
    worst = std::max(worst, std::min(err, std::abs(r.upper_bound - oracle)));
  }
  return {matched == kInstances && cross_checked == kInstances,
          Format("%d/%d matched, oracle cross-check %d/%d, worst err %.2e",
                 matched, kInstances, cross_checked, kInstances, worst)};
}

Verdict LeafIdentity() {
  Rng rng(1002);
  constexpr int kPairs = 100;
  int ok = 0;
  double worst = 0.0;
  for (int k = 0; k < kPairs; ++k) {
    const int n = UniformInt(rng, 5, 14);
    const int p = UniformInt(rng, 1, 3);
    const int q = UniformInt(rng, p + 1, n);
    const Dataset data = SmallSchemeInstance(rng, n, p, k);
    std::vector<int> rows(n);
    for (int i = 0; i < n; ++i) rows[i] = i;
    std::shuffle(rows.begin(), rows.end(), rng);
    BnbNode leaf;
    leaf.fixed_one.assign(rows.begin(), rows.begin() + q);
    std::sort(leaf.fixed_one.begin(), leaf.fixed_one.end());
    const NodeBound nb = NodeRelaxation(BuildModel(data, {q}), leaf);
    const double cheb = ChebyshevFit(data, leaf.fixed_one).objective;
    // Independent value: the minimax fit of the subset by vertex search.
    const double vertex = VertexLqsOracle(data.Subset(leaf.fixed_one), q);
    worst = std::max(worst, std::abs(nb.bound - cheb));
    if (nb.exact && std::abs(nb.bound - cheb) <= 1e-9 &&
        std::abs(cheb - vertex) <= 1e-7 * (1 + vertex)) {
      ++ok;
    }
  }
  return {ok == kPairs,
          Format("%d/%d leaves, worst |leaf - chebyshev| %.2e", ok, kPairs,
                 worst)};
}

Verdict MonotonicityAndRate() {
  Rng rng(1003);
  constexpr int kInstances = 50;
  int ok = 0;
  int steps = 0;
  double worst_increase = -kInf;
  double worst_rate = kInf;
  for (int k = 0; k < kInstances; ++k) {
    const int n = UniformInt(rng, 10, 100);
    const int p = UniformInt(rng, 1, 5);
    Dataset data = RandomDataset(rng, n, p);
    for (int i = 0; i < n / 4; ++i) data.y(i) += 50.0;
    const QuantileSpec q{UniformInt(rng, p + 1, n)};
    SeqLoConfig config;
    config.record_trace = true;
    config.tol = 1e-12;
    config.max_iter = 50;
    const SeqLoResult r =
        SequentialLo(data, q, NormalVector(rng, p, 3.0), config);
    const auto& s = r.states;
    bool good = !s.empty();
    double min_neg_delta = kInf;
    for (size_t j = 0; j + 1 < s.size(); ++j) {
      ++steps;
      const double increase = s[j + 1].objective - s[j].objective;
      worst_increase = std::max(worst_increase, increase);
      good &= increase <= 1e-9;
      min_neg_delta = std::min(min_neg_delta, -s[j].delta);
      const double K = static_cast<double>(j + 1);
      const double slack =
          (s[0].objective - s[j + 1].objective) / K - min_neg_delta;
      worst_rate = std::min(worst_rate, slack);
      good &= slack >= -1e-9;
    }
    if (good) ++ok;
  }
  return {ok == kInstances,
          Format("%d/%d traces, %d steps, max increase %.2e, min rate "
                 "slack %.2e",
                 ok, kInstances, steps, worst_increase, worst_rate)};
}

Verdict SubdifferentialCorrectness() {
  Rng rng(1004);
  constexpr int kPoints = 100;
  int ok = 0;
  double worst = 0.0;
  int k = 0;
  while (k < kPoints) {
    const int n = UniformInt(rng, 4, 30);
    const int p = UniformInt(rng, 1, 4);
    const Dataset data = RandomDataset(rng, n, p);
    const Eigen::VectorXd beta = NormalVector(rng, p, 2.0);
    // Generic point: distinct, nonzero absolute residuals with a margin far
    // above the finite-difference step, so f_q and H_m are smooth nearby.
    const Eigen::VectorXd r = data.Residuals(beta);
    std::vector<double> a(r.size());
    for (int i = 0; i < n; ++i) a[i] = std::abs(r(i));
    std::sort(a.begin(), a.end());
    bool generic = a.front() > 1e-3;
    for (int i = 0; i + 1 < n; ++i) generic &= a[i + 1] - a[i] > 1e-3;
    if (!generic) continue;
    ++k;
    const int q = UniformInt(rng, 1, n);
    const int m = UniformInt(rng, 1, n);
    Eigen::VectorXd d = NormalVector(rng, p);
    d /= d.norm();
    const double h = 1e-7;
    const double fd_f = (LqsObjective(data, beta + h * d, {q}) -
                         LqsObjective(data, beta - h * d, {q})) /
                        (2 * h);
    const double fd_h = (TopSum(data.Residuals(beta + h * d), m) -
                         TopSum(data.Residuals(beta - h * d), m)) /
                        (2 * h);
    const double g_f = LqsSubdifferential(data, beta, {q}).dot(d);
    const double g_h = HSubgradient(data, beta, m).dot(d);
    const double err_f = std::abs(fd_f - g_f) / (1 + std::abs(g_f));
    const double err_h = std::abs(fd_h - g_h) / (1 + std::abs(g_h));
    worst = std::max({worst, err_f, err_h});
    if (err_f <= 1e-4 && err_h <= 1e-4) ++ok;
  }
  return {ok == kPoints,
          Format("%d/%d points, worst scaled error %.2e", ok, kPoints, worst)};
}

Verdict LpDuality() {
  Rng rng(1005);
  int dual_ok = 0;
  double worst_gap = 0.0, worst_feas = 0.0;
  for (int k = 0; k < 500; ++k) {
    const LinearProgram lp = RandomSolvableLp(rng, /*finite_bounds=*/false);
    const LpSolution sol = SolveLp(lp);
    if (sol.status != LpStatus::kOptimal) continue;
    const double gap = std::abs(sol.objective_value - DualObjective(lp, sol));
    const double feas = MaxPrimalViolation(lp, sol.primal);
    worst_gap = std::max(worst_gap,
                         gap / (1 + std::abs(sol.objective_value)));
    worst_feas = std::max(worst_feas, feas);
    if (gap <= 1e-7 * (1 + std::abs(sol.objective_value)) && feas <= 1e-8) {
      ++dual_ok;
    }
  }
  int enum_ok = 0;
  for (int k = 0; k < 50; ++k) {
    const LinearProgram lp = RandomSolvableLp(rng, /*finite_bounds=*/true);
    const LpSolution sol = SolveLp(lp);
    const std::optional<double> vertex = VertexEnumerationMin(lp);
    if (sol.status == LpStatus::kOptimal && vertex.has_value() &&
        std::abs(sol.objective_value - *vertex) <=
            1e-7 * (1 + std::abs(*vertex))) {
      ++enum_ok;
    }
  }
  return {dual_ok == 500 && enum_ok == 50,
          Format("duality %d/500 (worst gap %.2e, infeas %.2e), "
                 "enumeration %d/50",
                 dual_ok, worst_gap, worst_feas, enum_ok)};
}

Verdict Breakdown() {
  Rng rng(1006);
  constexpr int kFixtures = 5;
  int ok = 0;
  double worst_drift = 0.0;
  double min_growth = kInf;
  bool fraction_ok = true;
  for (int k = 0; k < kFixtures; ++k) {
    const Dataset data = RandomDataset(rng, 10, UniformInt(rng, 1, 2));
    BreakdownOptions options;
    options.magnitudes = {1e3, 1e6, 1e9};
    options.trials = 2;
    options.seed = 50 + k;
    const BreakdownReport r = BreakdownProbe(data, {7}, options);
    fraction_ok &= r.breakdown_numerator == 4 &&
                   r.breakdown_denominator == 10 &&
                   r.breakdown_fraction == 4.0 / 10.0;
    bool good = r.passed;
    for (const BreakdownCase& c : r.cases) {
      if (c.m == 3) {
        worst_drift = std::max(worst_drift, c.max_drift);
        good &= c.max_drift <= 1e-6;
      } else {
        min_growth = std::min(min_growth, c.growth);
        good &= c.growth >= 1e3;
      }
    }
    if (good) ++ok;
  }
  // The same arithmetic for the first example's sizes and for LMS.
  const QuantileSpec lms = QuantileSpec::Median(201);
  fraction_ok &= 201 - lms.q + 1 == 201 / 2 + 1;
  return {ok == kFixtures && fraction_ok,
          Format("%d/%d fixtures, m=3 max drift %.2e, m=4 min growth %.2e, "
                 "fraction 4/10 %s",
                 ok, kFixtures, worst_drift, min_growth,
                 fraction_ok ? "exact" : "wrong")};
}

Verdict Multiplicity() {
  Rng rng(1007);
  constexpr int kInstances = 50;
  int ok = 0;
  for (int k = 0; k < kInstances; ++k) {
    const int n = UniformInt(rng, 6, 12);
    const int p = UniformInt(rng, 1, 3);
    const int q = UniformInt(rng, p + 1, n);
    const Dataset data = RandomDataset(rng, n, p);
    const FitResult best = EnumerateLqs(data, {q});
    if (CountAtLevel(data.Residuals(best.beta), best.objective, 1e-7) >=
        p + 1) {
      ++ok;
    }
  }
  const bool pass = ok >= static_cast<int>(std::ceil(0.95 * kInstances));
  return {pass, Format("%d/%d instances with >= p+1 ties (need 95%%)", ok,
                       kInstances)};
}

Verdict Dominance() {
  BenchOptions options;
  options.example = "Ex1";
  options.divisor = 4;
  options.algos = {"subgrad", "hybrid", "mio-warm"};
  options.instances = 20;
  options.seed = 2026;
  options.mio_time_limit_s = 2.0;
  const BenchReport r = RunBench(options);
  int chain = 0;
  for (int k = 0; k < options.instances; ++k) {
    const double sub = r.runs[3 * k].objective;
    const double hyb = r.runs[3 * k + 1].objective;
    const double mio = r.runs[3 * k + 2].objective;
    if (mio <= hyb && hyb <= sub) ++chain;
  }
  const double mio_acc = r.summary[2].mean_accuracy;
  const bool shape = r.n == 51 && r.p == 5 && r.q == 30;
  return {chain == options.instances && mio_acc == 0.0 && shape,
          Format("n=%d p=%d q=%d, chain %d/%d, rel acc subgrad %.3g (%.3g) "
                 "hybrid %.3g (%.3g) mio-warm %.3g (%.3g)",
                 r.n, r.p, r.q, chain, options.instances,
                 r.summary[0].mean_accuracy, r.summary[0].se_accuracy,
                 r.summary[1].mean_accuracy, r.summary[1].se_accuracy, mio_acc,
                 r.summary[2].se_accuracy)};
}

Verdict BoxBounds() {
  // Fixed instance: n = 30, p = 3, scheme B, 10% contamination, unit scales.
  SyntheticSpec spec;
  spec.n = 30;
  spec.p = 3;
  spec.pi = 0.1;
  spec.scheme = Scheme::kB;
  spec.seed = 5;
  spec.x_sd = 1.0;
  spec.noise_sd = 1.0;
  const Dataset data = Generate(spec).data;
  const QuantileSpec q{27};
  InitStrategy init;
  init.runs = 20;
  init.seed = 1;
  const HybridResult hybrid = Hybrid(data, q, init);
  const double oracle = EnumerateLqs(data, q).objective;

  double root[2], optimum[2];
  bool certified = true;
  bool oracle_match = true;
  const double radii[2] = {3.0, 40.0};
  for (int k = 0; k < 2; ++k) {
    BetaConstraints box;
    box.box = BetaConstraints::Box{hybrid.fit.beta, radii[k]};
    MioLimits limits;
    limits.time_limit_s = 300.0;
    limits.gap_tol = 1e-9;
    const MioResult r = Solve(BuildModel(data, q, box, hybrid.fit.objective),
                              hybrid.fit.beta, limits);
    root[k] = r.root_bound;
    optimum[k] = r.upper_bound;
    certified &= r.status == MioStatus::kProvedOptimal;
    const double boxed_oracle =
        EnumerateLqs(data, q, kDefaultSubsetLimit, box).objective;
    oracle_match &= RelErr(r.upper_bound, boxed_oracle) <= 1e-6;
  }
  // The unconstrained optimum lies in the small box when its value is
  // attained there.
  const bool inside = RelErr(optimum[0], oracle) <= 1e-6;
  const bool pass = root[0] >= root[1] && certified && oracle_match &&
                    inside && RelErr(optimum[0], optimum[1]) <= 1e-6;
  return {pass, Format("root r=3 %.6g >= r=40 %.6g, optima %.10g / %.10g, "
                       "unconstrained %.10g, certified %s",
                       root[0], root[1], optimum[0], optimum[1], oracle,
                       certified ? "yes" : "no")};
}

std::string WithoutWallTime(const std::string& text) {
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(text);
  j.erase("wall_time_s");
  return j.dump();
}

// One pass of datagen -> csv -> fits and mio -> result.json, in process.
std::vector<std::string> LibraryPipeline(int threads) {
  std::vector<std::string> out;
  const NamedExample ex = GetNamedExample("Ex1", 8, 99);
  const std::string csv = CsvString(Generate(ex.spec).data);
  out.push_back(csv);
  std::istringstream in(csv);
  const Dataset data = ParseCsv(in);
  InitStrategy init;
  init.runs = 8;
  init.seed = 4;
  HybridOptions options;
  options.threads = threads;
  const std::vector<Eigen::VectorXd> starts = InitialPoints(data, ex.q, init);
  const HybridResult h = Hybrid(data, ex.q, starts, options);
  const HybridResult s = DescentOnly(data, ex.q, starts, options);
  for (const auto& [algo, beta] :
       {std::pair{"hybrid", h.fit.beta}, std::pair{"subgrad", s.fit.beta}}) {
    ResultRecord rec;
    rec.algo = algo;
    rec.beta = beta;
    rec.objective = LqsObjective(data, beta, ex.q);
    rec.seed = 4;
    out.push_back(ResultJsonString(rec, data, ex.q));
  }
  MioLimits limits;
  limits.node_limit = 2000;  // a node cap, unlike a time cap, is reproducible
  const MioResult m = Solve(BuildModel(data, ex.q, {}, h.fit.objective),
                            h.fit.beta, limits);
  ResultRecord rec;
  rec.algo = "mio";
  rec.beta = m.incumbent_beta;
  rec.objective = m.upper_bound;
  rec.bounds = ResultBounds{m.upper_bound, m.lower_bound, m.gap};
  rec.status = MioStatusName(m.status);
  rec.nodes = m.nodes_explored;
  rec.wall_time_s = m.wall_time_s;
  out.push_back(WithoutWallTime(ResultJsonString(rec, data, ex.q)));
  return out;
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The same pipeline through the command-line tool, in a fresh directory.
std::vector<std::string> CliPipeline(const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::string cli = LQS_CLI_PATH;
  const std::vector<std::string> commands = {
      "--seed 11 datagen --example Ex1 --scale 8 --out " + dir + "/d.csv",
      "--seed 11 fit --algo hybrid --q 15 --runs 8 --in " + dir +
          "/d.csv --out " + dir + "/h.json",
      "--seed 11 fit --algo seqlo --q 15 --in " + dir + "/d.csv --out " +
          dir + "/s.json",
      "--seed 11 mio --q 15 --node-limit 2000 --warm-start " + dir +
          "/h.json --in " + dir + "/d.csv --out " + dir + "/m.json",
      "--seed 11 breakdown --q 7 --in " + dir + "/d10.csv --out " + dir +
          "/b.json",
  };
  {
    Rng rng(3);
    WriteCsv(RandomDataset(rng, 10, 2), dir + "/d10.csv");
  }
  std::vector<std::string> out;
  for (const std::string& c : commands) {
    const int status = std::system((cli + " " + c + " 2>/dev/null").c_str());
    out.push_back(WIFEXITED(status) ? std::to_string(WEXITSTATUS(status))
                                    : "signal");
  }
  out.push_back(Slurp(dir + "/d.csv"));
  for (const char* f : {"/h.json", "/s.json", "/m.json"}) {
    out.push_back(WithoutWallTime(Slurp(dir + f)));
  }
  out.push_back(Slurp(dir + "/b.json"));
  return out;
}

Verdict Determinism() {
  const std::vector<std::string> a = LibraryPipeline(1);
  const std::vector<std::string> b = LibraryPipeline(1);
  const std::vector<std::string> c = LibraryPipeline(4);
  const std::string base = (std::filesystem::temp_directory_path() /
                            ("lqs_acceptance_" + std::to_string(::getpid())))
                               .string();
  const std::vector<std::string> x = CliPipeline(base + "_a");
  const std::vector<std::string> y = CliPipeline(base + "_b");
  std::filesystem::remove_all(base + "_a");
  std::filesystem::remove_all(base + "_b");
  bool exits_ok = true;
  for (int i = 0; i < 5; ++i) exits_ok &= x[i] == "0";
  const bool pass = a == b && a == c && x == y && exits_ok;
  return {pass, Format("library runs %s, threads 1 vs 4 %s, cli runs %s, "
                       "cli exits %s",
                       a == b ? "identical" : "differ",
                       a == c ? "identical" : "differ",
                       x == y ? "identical" : "differ",
                       exits_ok ? "0" : "nonzero")};
}

struct Criterion {
  const char* name;
  Verdict (*run)();
};

int Main() {
  const Criterion criteria[] = {
      {"oracle_equivalence", OracleEquivalence},
      {"leaf_identity", LeafIdentity},
      {"sequential_lo_monotone_rate", MonotonicityAndRate},
      {"subdifferential", SubdifferentialCorrectness},
      {"lp_duality", LpDuality},
      {"breakdown", Breakdown},
      {"residual_multiplicity", Multiplicity},
      {"dominance_chain", Dominance},
      {"box_bounds", BoxBounds},
      {"determinism", Determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
    std::printf("%s %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", c.name,
                v.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace lqs

int main() { return lqs::Main(); }
