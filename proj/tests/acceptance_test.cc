/*
 * Copyright 2026 The agreesim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "agreesim/conflation.h"
#include "agreesim/metrics.h"
#include "agreesim/models.h"
#include "agreesim/simulate.h"
#include "agreesim/synth.h"
#include "cli_app.h"

namespace {

using namespace agreesim;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Seeds fixed before the first run.
constexpr uint64_t kDatasetSeed = 1;
constexpr uint64_t kSimulationSeed = 1;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

Outcome AucOracle() {
  const auto start = Clock::now();
  Rng rng(20260101);
  int mismatches = 0;
  int instances = 0;
  while (instances < 1000) {
    const std::size_t n = 1 + rng.UniformIndex(12);
    std::vector<BinaryLabel> truth(n);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = static_cast<BinaryLabel>(rng.UniformIndex(2));
      scores[i] = rng.Uniform01();
    }
    // Inject ties by copying scores between random positions.
    const std::size_t ties = rng.UniformIndex(n + 1);
    for (std::size_t t = 0; t < ties; ++t) {
      scores[rng.UniformIndex(n)] = scores[rng.UniformIndex(n)];
    }
    const bool has_pos = std::count(truth.begin(), truth.end(), 1) > 0;
    const bool has_neg = std::count(truth.begin(), truth.end(), 0) > 0;
    if (!has_pos || !has_neg) continue;
    ++instances;
    if (Auc({truth, scores}) != AucBruteForce({truth, scores})) ++mismatches;
  }
  const double elapsed = Seconds(start);
  return {mismatches == 0 && elapsed < 5.0,
          Fmt("%.0f mismatches over 1000 instances, %.3f s", mismatches,
              elapsed)};
}

Dataset Fixture() {
  return Dataset(ControversyScheme(), {{"a", {1, 1}}, {"b", {1, 0}}});
}

Outcome HandCountedFixture() {
  const Dataset data = Fixture();
  const ConflationMatrix m = LearnConflation(data);
  const auto& s = m.scheme();
  const auto cell = [&](int a, int b) {
    return m.counts()[*s.IndexOf(a)][*s.IndexOf(b)];
  };
  const double agreement = AgreementProbability(data);
  const bool pass = cell(1, 1) == 2 && cell(1, 0) == 1 && cell(0, 1) == 1 &&
                    m.Total() == 4 && agreement == 0.5 && m.Agreement() == 0.5;
  return {pass, Fmt("[1][1]=%.0f [1][0]=%.0f agreement=%.17g",
                    static_cast<double>(cell(1, 1)),
                    static_cast<double>(cell(1, 0)), agreement)};
}

Outcome Table1Consistency() {
  // Counts as printed, highest label first.
  const ConflationMatrix m = ParseMatrixJson(R"({
    "labels": [[2, "Very Controversial"], [1, "Controversial"],
               [0, "Possibly Non-Controversial"],
               [-1, "Clearly Non-Controversial"]],
    "positive_threshold": 0.5,
    "counts": [[237, 83, 23, 48], [83, 182, 27, 53],
               [23, 27, 133, 92], [48, 53, 92, 594]]})");
  const double agreement = m.Agreement();
  const auto& row = m.RowDistributionFor(2);
  const auto& s = m.scheme();
  const double expected[4] = {0.606, 0.212, 0.059, 0.123};
  const int order[4] = {2, 1, 0, -1};
  bool rows_ok = true;
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double diff = std::abs(row[*s.IndexOf(order[i])] - expected[i]);
    worst = std::max(worst, diff);
    rows_ok = rows_ok && diff <= 5e-4;
  }
  const bool pass = m.Trace() == 1146 && m.Total() == 1798 &&
                    std::abs(agreement - 0.637375) <= 1e-9 && rows_ok;
  return {pass,
          Fmt("agreement=%.12f (1146/1798=%.12f, |diff to 0.637375|=%.2e)",
              agreement, 1146.0 / 1798.0, std::abs(agreement - 0.637375)) +
              Fmt(" |row err|max=%.5f", worst)};
}

Outcome FlipKeepRate() {
  Rng rng(kSimulationSeed);
  const LabelScheme scheme = ControversyScheme();
  constexpr int kDraws = 100000;
  int kept = 0;
  for (int i = 0; i < kDraws; ++i) {
    const int input = scheme.ValueAt(i % scheme.size());
    if (FlipLabel(input, 0.643, scheme, rng) == input) ++kept;
  }
  const double rate = static_cast<double>(kept) / kDraws;
  return {std::abs(rate - 0.643) <= 0.005, Fmt("keep rate %.5f", rate)};
}

struct Table2Run {
  std::vector<SuiteEntry> entries;
  double seconds = 0.0;
};

Table2Run RunCalibratedTable2() {
  const auto start = Clock::now();
  SynthConfig synth;
  synth.mode = MatrixCalibratedMode{ControversyReferenceMatrix()};
  synth.n_docs = 343;
  synth.annotators = {{3, 1.0}};
  synth.seed = kDatasetSeed;
  const Dataset data = Generate(synth);
  const ConflationMatrix matrix = LearnConflation(data);
  SimulationConfig defaults;
  defaults.n_trials = 10000;
  defaults.master_seed = kSimulationSeed;
  const auto configs = LookupPreset("table2", defaults);
  Table2Run run;
  run.entries = RunSuite(configs, data, &matrix, {0});
  run.seconds = Seconds(start);
  return run;
}

Outcome CalibratedTable2(const Table2Run& run) {
  std::string detail = "medians";
  std::vector<double> medians;
  for (const auto& e : run.entries) {
    if (!e.ok()) return {false, "row failed: " + e.error};
    medians.push_back(e.report->PercentileValue(50));
    detail += Fmt(" %.3f", medians.back());
  }
  if (medians.size() != 6) return {false, "preset did not produce 6 rows"};
  bool monotone = true;
  for (std::size_t i = 1; i < medians.size(); ++i) {
    if (medians[i] > medians[i - 1] + 0.02) monotone = false;
  }
  const bool row6 = std::abs(medians[5] - 0.639) <= 0.05;
  const bool row1 = std::abs(medians[0] - 0.890) <= 0.06;
  detail += std::string("; monotone=") + (monotone ? "yes" : "no") +
            " row6=" + (row6 ? "ok" : "out") + " row1=" +
            (row1 ? "ok" : "out") + Fmt("; %.1f s", run.seconds);
  return {monotone && row6 && row1 && run.seconds < 60.0, detail};
}

Outcome ClaimAssessmentCheck(const Table2Run& run) {
  if (run.entries.empty() || !run.entries[0].ok()) {
    return {false, "row 1 has no samples"};
  }
  const SimulationReport& row1 = *run.entries[0].report;
  const double median = row1.PercentileValue(50);
  const auto low = AssessClaim(0.743, row1.samples);
  const auto mid = AssessClaim(median, row1.samples);
  const auto high = AssessClaim(0.99, row1.samples);
  const bool pass = low.verdict == Verdict::kBelowBand &&
                    mid.verdict == Verdict::kWithinBand &&
                    high.verdict == Verdict::kAboveBand;
  std::string detail = "0.743 -> " + std::string(VerdictName(low.verdict)) +
                       Fmt(", %.3f -> ", median) +
                       std::string(VerdictName(mid.verdict)) + ", 0.99 -> " +
                       std::string(VerdictName(high.verdict));
  return {pass, detail};
}

int InvokeCli(const std::vector<std::string>& args, std::string* err) {
  std::vector<const char*> argv = {"agreesim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, errs;
  const int status = cli::Run(static_cast<int>(argv.size()), argv.data(), out,
                              errs);
  *err = errs.str();
  return status;
}

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome CliDeterminism() {
  const fs::path dir = fs::temp_directory_path() / "agreesim_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string data = (dir / "data.jsonl").string();
  std::string err;
  if (InvokeCli({"synth", "--seed", std::to_string(kDatasetSeed), "--out",
                 data},
                &err) != 0) {
    return {false, "synth failed: " + err};
  }
  std::string reports[3];
  const char* jobs[3] = {"1", "1", "8"};
  for (int i = 0; i < 3; ++i) {
    const std::string out = (dir / ("report" + std::to_string(i))).string();
    if (InvokeCli({"simulate", data, "--system", "conflate(sample)", "--truth",
                   "sample", "--trials", "2000", "--seed",
                   std::to_string(kSimulationSeed), "--jobs", jobs[i], "--out",
                   out + ".json", "--samples-out", out + ".samples"},
                  &err) != 0) {
      return {false, "simulate failed: " + err};
    }
    reports[i] = ReadAll(out + ".json") + ReadAll(out + ".samples");
  }
  fs::remove_all(dir);
  const bool repeat = reports[0] == reports[1];
  const bool threads = reports[0] == reports[2];
  return {repeat && threads && !reports[0].empty(),
          std::string("repeat ") + (repeat ? "identical" : "differs") +
              ", jobs 1 vs 8 " + (threads ? "identical" : "differs")};
}

Outcome DegenerateSanity() {
  std::vector<Dataset> datasets;
  datasets.push_back(
      Dataset(ControversyScheme(), {{"a", {2, 2}}, {"b", {-1, 0}}}));
  datasets.push_back(Dataset(ControversyScheme(),
                             {{"a", {2, -1, 1}}, {"b", {-1}}, {"c", {0, 0}}}));
  for (uint64_t seed : {kDatasetSeed, kDatasetSeed + 1}) {
    SynthConfig synth;
    synth.seed = seed;
    synth.n_docs = 60;
    datasets.push_back(Generate(synth));
  }
  bool perfect = true;
  uint64_t trials = 0;
  for (const Dataset& data : datasets) {
    SimulationConfig config;
    config.system_model = ModelSpec::CanonicalTruth();
    config.truth_model = ModelSpec::CanonicalTruth();
    config.n_trials = 200;
    config.master_seed = kSimulationSeed;
    const auto report = RunSimulation(config, data, nullptr);
    trials += report.n_valid;
    perfect = perfect && report.n_undefined == 0;
    for (double s : report.samples) perfect = perfect && s == 1.0;
  }
  Rng rng(kSimulationSeed);
  bool constant = true;
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 2 + rng.UniformIndex(30);
    std::vector<BinaryLabel> truth(n);
    for (auto& t : truth) t = static_cast<BinaryLabel>(rng.UniformIndex(2));
    truth[0] = 1;
    truth[1] = 0;
    const std::vector<double> scores(n, rng.Uniform01());
    constant = constant && Auc({truth, scores}) == 0.5;
  }
  return {perfect && constant,
          Fmt("truth vs truth over %.0f trials: ", static_cast<double>(trials)) +
              (perfect ? "all 1.0" : "not all 1.0") +
              (constant ? "; constant scores: all 0.5"
                        : "; constant scores: not all 0.5")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  Table2Run table2;
  bool table2_ran = false;
  const auto table2_once = [&]() -> const Table2Run& {
    if (!table2_ran) {
      table2 = RunCalibratedTable2();
      table2_ran = true;
    }
    return table2;
  };
  const std::vector<Criterion> criteria = {
      {"1 AUC oracle equivalence", AucOracle},
      {"2 hand-counted conflation fixture", HandCountedFixture},
      {"3 reference matrix consistency", Table1Consistency},
      {"4 flip keep-rate", FlipKeepRate},
      {"5 calibrated six-row reproduction",
       [&] { return CalibratedTable2(table2_once()); }},
      {"6 claim assessment", [&] { return ClaimAssessmentCheck(table2_once()); }},
      {"7 CLI determinism", CliDeterminism},
      {"8 degenerate sanity", DegenerateSanity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("[%s] %s: %s\n", outcome.pass ? "PASS" : "FAIL", c.name,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
