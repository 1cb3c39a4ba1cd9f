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

// Monte Carlo engine: repeatedly draws a truth assignment and a system
// assignment from two label models, scores the system against the truth,
// and summarises the metric distribution by percentiles.
//
// Trial t always uses the random stream derived from (master_seed, t) and
// samples are sorted before aggregation, so a report does not depend on the
// number of worker threads or on scheduling.

#ifndef AGREESIM_SIMULATE_H_
#define AGREESIM_SIMULATE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "agreesim/conflation.h"
#include "agreesim/label_core.h"
#include "agreesim/models.h"

namespace agreesim {

inline constexpr uint64_t kDefaultTrials = 10000;

struct SimulationConfig {
  ModelSpec system_model = ModelSpec::Sample();
  ModelSpec truth_model = ModelSpec::Average();
  std::string metric = "auc";
  uint64_t n_trials = kDefaultTrials;
  uint64_t master_seed = 0;
  std::vector<double> percentiles = {5.0, 50.0, 95.0};
  FlipSpace flip_space = FlipSpace::kBinary;

  // Throws ValidationError for n_trials == 0 or percentiles that are not
  // strictly increasing inside (0, 100).
  void Validate() const;
};

struct SimulationReport {
  SimulationConfig config;
  // (percentile, metric value), in config.percentiles order.
  std::vector<std::pair<double, double>> percentile_values;
  double mean = 0.0;
  uint64_t n_valid = 0;
  uint64_t n_undefined = 0;
  // FNV-1a 64 over the bit patterns of `samples`, as 16 hex digits.
  std::string samples_digest;
  // Metric values of the valid trials, ascending.
  std::vector<double> samples;

  // Value at `q`, which must be one of the configured percentiles.
  double PercentileValue(double q) const;
};

struct RunOptions {
  // Worker threads; 0 means one per hardware thread.
  unsigned jobs = 1;
};

// Throws ConfigError when a model cannot be applied (e.g. conflate without
// `matrix`) or the metric is unknown, UndefinedError when every trial's
// metric is undefined.
SimulationReport RunSimulation(const SimulationConfig& config,
                               const Dataset& dataset,
                               const ConflationMatrix* matrix,
                               const RunOptions& options = {});

// Result of one suite entry: a report, or the error that stopped it.
struct SuiteEntry {
  SimulationConfig config;
  std::optional<SimulationReport> report;
  std::string error;

  bool ok() const { return report.has_value(); }
};

// Runs every config in order. A failing config is recorded and the suite
// moves on.
std::vector<SuiteEntry> RunSuite(std::span<const SimulationConfig> configs,
                                 const Dataset& dataset,
                                 const ConflationMatrix* matrix,
                                 const RunOptions& options = {});

// The six standard pairings, optimistic to pessimistic:
//   1 sample / average            4 conflate(truth) / sample
//   2 sample / max                5 conflate(sample) / conflate(sample)
//   3 sample / sample             6 flip(0.643, truth) / average
// Metric, trial count, seed, percentiles and flip space come from
// `defaults`.
std::vector<SimulationConfig> Table2Preset(const SimulationConfig& defaults);

std::vector<std::string> PresetNames();
// Throws ConfigError listing the valid presets for an unknown name.
std::vector<SimulationConfig> LookupPreset(std::string_view name,
                                           const SimulationConfig& defaults);

// Suite config file: a JSON array (or {"configs": [...]}) of objects with
// "system" and "truth" spec strings and optional "metric", "trials",
// "seed", "percentiles" and "flip_space" overriding `defaults`.
std::vector<SimulationConfig> ParseSuiteConfigJson(
    std::string_view text, const SimulationConfig& defaults);

// Nearest-rank percentile: the ascending sample at index ceil(q/100*n) - 1.
// Throws ValidationError for empty samples or q outside (0, 100).
double Percentile(std::span<const double> samples, double q);

enum class Verdict { kBelowBand, kWithinBand, kAboveBand };

struct ClaimAssessment {
  // Percentage of samples strictly below the score, ties counting half.
  double percentile_rank = 0.0;
  Verdict verdict = Verdict::kWithinBand;
};

// Places a published score within the simulated distribution. Above the
// band means the score beats the simulated human ceiling; within means it
// is indistinguishable from it.
ClaimAssessment AssessClaim(double score, std::span<const double> samples,
                            double low = 5.0, double high = 95.0);

std::string_view VerdictName(Verdict verdict);
FlipSpace ParseFlipSpace(std::string_view name);
std::string_view FlipSpaceName(FlipSpace space);

std::string SamplesDigest(std::span<const double> sorted_samples);

// Structured report (JSON) without the raw samples.
std::string ReportToJson(const SimulationReport& report);
// JSON array of reports; failed entries carry an "error" member.
std::string SuiteToJson(std::span<const SuiteEntry> entries);

// One ascending value per line, printed with 17 significant digits.
std::string SamplesToText(std::span<const double> samples);
// Inverse of SamplesToText; blank lines and '#' comments are skipped.
std::vector<double> ParseSamplesText(std::string_view text);

// "system vs truth [metric]: p5=... p50=... p95=... (...)".
std::string FormatSummary(const SimulationReport& report);

// Markdown table with columns #, System Model, Truth Model and one column
// per percentile.
std::string FormatMarkdownTable(std::span<const SuiteEntry> entries);

}  // namespace agreesim

#endif  // AGREESIM_SIMULATE_H_
