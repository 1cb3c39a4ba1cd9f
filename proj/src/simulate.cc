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

#include "agreesim/simulate.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "agreesim/errors.h"
#include "agreesim/metrics.h"
#include "agreesim/rng.h"
#include "json_util.h"

namespace agreesim {

using internal::Json;

namespace {

std::string FormatNumber(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

std::string OrdinalSuffix(double q) {
  const std::string number = FormatNumber(q);
  if (q != std::floor(q)) return number + "th";
  const auto n = static_cast<long long>(q);
  const long long last_two = n % 100;
  const char* suffix = "th";
  if (last_two < 11 || last_two > 13) {
    switch (n % 10) {
      case 1: suffix = "st"; break;
      case 2: suffix = "nd"; break;
      case 3: suffix = "rd"; break;
      default: break;
    }
  }
  return number + suffix;
}

double PercentileSorted(std::span<const double> sorted, double q) {
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(q / 100.0 * n));
  if (rank == 0) rank = 1;
  return sorted[std::min(rank, sorted.size()) - 1];
}

// One trial: returns nullopt when the metric is undefined.
std::optional<double> RunTrial(const SimulationConfig& config,
                               const Dataset& dataset,
                               const ModelOptions& model_options,
                               const MetricFn& metric, uint64_t trial) {
  Rng rng = Rng::ForStream(config.master_seed, trial);
  const Assignment truth =
      ApplyModel(config.truth_model, dataset, model_options, rng);
  const Assignment system =
      ApplyModel(config.system_model, dataset, model_options, rng);
  std::vector<BinaryLabel> binary(truth.values.size());
  for (std::size_t i = 0; i < truth.values.size(); ++i) {
    binary[i] = Binarize(truth.values[i], dataset.scheme()) ? 1 : 0;
  }
  try {
    return metric(MetricInput{binary, system.values}, dataset.scheme());
  } catch (const UndefinedError&) {
    return std::nullopt;
  }
}

}  // namespace

void SimulationConfig::Validate() const {
  if (n_trials == 0) throw ValidationError("n_trials must be at least 1");
  if (percentiles.empty()) throw ValidationError("no percentiles requested");
  for (std::size_t i = 0; i < percentiles.size(); ++i) {
    const double q = percentiles[i];
    if (!(q > 0.0 && q < 100.0)) {
      throw ValidationError("percentile " + FormatNumber(q) +
                            " outside (0, 100)");
    }
    if (i > 0 && !(q > percentiles[i - 1])) {
      throw ValidationError("percentiles must be strictly increasing");
    }
  }
}

double SimulationReport::PercentileValue(double q) const {
  for (const auto& [pct, value] : percentile_values) {
    if (pct == q) return value;
  }
  throw ValidationError("percentile " + FormatNumber(q) + " not in report");
}

SimulationReport RunSimulation(const SimulationConfig& config,
                               const Dataset& dataset,
                               const ConflationMatrix* matrix,
                               const RunOptions& options) {
  config.Validate();
  const MetricFn metric = LookupMetric(config.metric);
  const ModelOptions model_options{matrix, config.flip_space};
  ValidateModel(config.truth_model, dataset.scheme(), model_options);
  ValidateModel(config.system_model, dataset.scheme(), model_options);

  const uint64_t n = config.n_trials;
  std::vector<std::optional<double>> results(n);
  unsigned jobs = options.jobs == 0 ? std::thread::hardware_concurrency()
                                    : options.jobs;
  jobs = static_cast<unsigned>(
      std::clamp<uint64_t>(jobs == 0 ? 1 : jobs, 1, n));

  std::atomic<uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const uint64_t t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= n) return;
      try {
        results[t] = RunTrial(config, dataset, model_options, metric, t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& thread : threads) thread.join();
  }
  if (failure) std::rethrow_exception(failure);

  SimulationReport report;
  report.config = config;
  for (const auto& r : results) {
    if (r) report.samples.push_back(*r);
  }
  report.n_valid = report.samples.size();
  report.n_undefined = n - report.n_valid;
  if (report.samples.empty()) {
    throw UndefinedError("metric undefined in all " + std::to_string(n) +
                         " trials");
  }
  std::sort(report.samples.begin(), report.samples.end());
  double sum = 0.0;
  for (double s : report.samples) sum += s;
  report.mean = sum / static_cast<double>(report.n_valid);
  for (double q : config.percentiles) {
    report.percentile_values.emplace_back(q,
                                          PercentileSorted(report.samples, q));
  }
  report.samples_digest = SamplesDigest(report.samples);
  return report;
}

std::vector<SuiteEntry> RunSuite(std::span<const SimulationConfig> configs,
                                 const Dataset& dataset,
                                 const ConflationMatrix* matrix,
                                 const RunOptions& options) {
  std::vector<SuiteEntry> entries;
  entries.reserve(configs.size());
  for (const SimulationConfig& config : configs) {
    SuiteEntry entry{config, std::nullopt, {}};
    try {
      entry.report = RunSimulation(config, dataset, matrix, options);
    } catch (const Error& e) {
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<SimulationConfig> Table2Preset(const SimulationConfig& defaults) {
  const std::pair<const char*, const char*> pairings[] = {
      {"sample", "average"},
      {"sample", "max"},
      {"sample", "sample"},
      {"conflate(truth)", "sample"},
      {"conflate(sample)", "conflate(sample)"},
      {"flip(0.643,truth)", "average"},
  };
  std::vector<SimulationConfig> configs;
  for (const auto& [system, truth] : pairings) {
    SimulationConfig config = defaults;
    config.system_model = ParseModelSpec(system);
    config.truth_model = ParseModelSpec(truth);
    configs.push_back(std::move(config));
  }
  return configs;
}

std::vector<std::string> PresetNames() { return {"table2"}; }

std::vector<SimulationConfig> LookupPreset(std::string_view name,
                                           const SimulationConfig& defaults) {
  if (name == "table2") return Table2Preset(defaults);
  std::string known;
  for (const auto& preset : PresetNames()) {
    known += known.empty() ? preset : ", " + preset;
  }
  throw ConfigError("unknown preset \"" + std::string(name) +
                    "\" (valid presets: " + known + ")");
}

std::vector<SimulationConfig> ParseSuiteConfigJson(
    std::string_view text, const SimulationConfig& defaults) {
  Json value;
  try {
    value = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("suite config: invalid JSON (") + e.what() +
                     ")");
  }
  const Json& list = value.is_object() && value.contains("configs")
                         ? value.at("configs")
                         : value;
  if (!list.is_array()) {
    throw ParseError("suite config: expected an array of configs");
  }
  std::vector<SimulationConfig> configs;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Json& item = list[i];
    const std::string where = "suite config entry " + std::to_string(i + 1);
    if (!item.is_object() || !item.contains("system") ||
        !item.contains("truth") || !item.at("system").is_string() ||
        !item.at("truth").is_string()) {
      throw ParseError(where + ": needs string fields \"system\" and \"truth\"");
    }
    SimulationConfig config = defaults;
    try {
      config.system_model = ParseModelSpec(item.at("system").get<std::string>());
      config.truth_model = ParseModelSpec(item.at("truth").get<std::string>());
      if (item.contains("metric")) {
        config.metric = item.at("metric").get<std::string>();
      }
      if (item.contains("trials")) {
        config.n_trials = item.at("trials").get<uint64_t>();
      }
      if (item.contains("seed")) config.master_seed = item.at("seed").get<uint64_t>();
      if (item.contains("percentiles")) {
        config.percentiles = item.at("percentiles").get<std::vector<double>>();
      }
      if (item.contains("flip_space")) {
        config.flip_space =
            ParseFlipSpace(item.at("flip_space").get<std::string>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(where + ": " + e.what());
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
    configs.push_back(std::move(config));
  }
  return configs;
}

double Percentile(std::span<const double> samples, double q) {
  if (samples.empty()) throw ValidationError("percentile of empty samples");
  if (!(q > 0.0 && q < 100.0)) {
    throw ValidationError("percentile " + FormatNumber(q) + " outside (0, 100)");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return PercentileSorted(sorted, q);
}

ClaimAssessment AssessClaim(double score, std::span<const double> samples,
                            double low, double high) {
  if (samples.empty()) throw ValidationError("no samples to assess against");
  std::size_t below = 0;
  std::size_t equal = 0;
  for (double s : samples) {
    if (s < score) ++below;
    else if (s == score) ++equal;
  }
  ClaimAssessment out;
  out.percentile_rank = (static_cast<double>(below) +
                         0.5 * static_cast<double>(equal)) /
                        static_cast<double>(samples.size()) * 100.0;
  if (out.percentile_rank < low) {
    out.verdict = Verdict::kBelowBand;
  } else if (out.percentile_rank > high) {
    out.verdict = Verdict::kAboveBand;
  } else {
    out.verdict = Verdict::kWithinBand;
  }
  return out;
}

std::string_view VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kBelowBand: return "below_band";
    case Verdict::kWithinBand: return "within_band";
    case Verdict::kAboveBand: return "above_band";
  }
  return "";
}

FlipSpace ParseFlipSpace(std::string_view name) {
  if (name == "binary") return FlipSpace::kBinary;
  if (name == "ordinal") return FlipSpace::kOrdinal;
  throw ConfigError("unknown flip space \"" + std::string(name) +
                    "\" (expected binary or ordinal)");
}

std::string_view FlipSpaceName(FlipSpace space) {
  return space == FlipSpace::kBinary ? "binary" : "ordinal";
}

std::string SamplesDigest(std::span<const double> sorted_samples) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (double s : sorted_samples) {
    const auto bits = std::bit_cast<uint64_t>(s);
    for (int byte = 0; byte < 8; ++byte) {
      hash ^= (bits >> (8 * byte)) & 0xffU;
      hash *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

namespace {

Json ConfigJson(const SimulationConfig& config) {
  Json out = Json::object();
  out["system_model"] = config.system_model.ToString();
  out["truth_model"] = config.truth_model.ToString();
  out["metric"] = config.metric;
  out["n_trials"] = config.n_trials;
  out["master_seed"] = config.master_seed;
  out["flip_space"] = FlipSpaceName(config.flip_space);
  out["percentiles"] = config.percentiles;
  return out;
}

Json ReportJsonValue(const SimulationReport& report) {
  Json out = Json::object();
  out["config"] = ConfigJson(report.config);
  Json pct = Json::object();
  for (const auto& [q, value] : report.percentile_values) {
    pct[FormatNumber(q)] = value;
  }
  out["percentile_values"] = std::move(pct);
  out["mean"] = report.mean;
  out["n_valid"] = report.n_valid;
  out["n_undefined"] = report.n_undefined;
  out["samples_digest"] = report.samples_digest;
  return out;
}

}  // namespace

std::string ReportToJson(const SimulationReport& report) {
  return ReportJsonValue(report).dump(2) + "\n";
}

std::string SuiteToJson(std::span<const SuiteEntry> entries) {
  Json out = Json::array();
  for (const SuiteEntry& entry : entries) {
    if (entry.ok()) {
      out.push_back(ReportJsonValue(*entry.report));
    } else {
      Json failed = Json::object();
      failed["config"] = ConfigJson(entry.config);
      failed["error"] = entry.error;
      out.push_back(std::move(failed));
    }
  }
  return out.dump(2) + "\n";
}

std::string SamplesToText(std::span<const double> samples) {
  std::string out;
  char buf[40];
  for (double s : samples) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", s);
    out += buf;
  }
  return out;
}

std::vector<double> ParseSamplesText(std::string_view text) {
  std::vector<double> samples;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) {
      line.remove_prefix(1);
    }
    if (!line.empty() && line.front() != '#') {
      double value = 0.0;
      auto [ptr, ec] =
          std::from_chars(line.data(), line.data() + line.size(), value);
      if (ec != std::errc() || ptr != line.data() + line.size()) {
        throw ParseError("samples: line " + std::to_string(line_no) +
                         ": not a number");
      }
      samples.push_back(value);
    }
    start = end + 1;
  }
  if (samples.empty()) throw ValidationError("samples file holds no values");
  return samples;
}

std::string FormatSummary(const SimulationReport& report) {
  std::ostringstream out;
  out << report.config.system_model.ToString() << " vs "
      << report.config.truth_model.ToString() << " [" << report.config.metric
      << "]:";
  char buf[32];
  for (const auto& [q, value] : report.percentile_values) {
    std::snprintf(buf, sizeof(buf), "%.3f", value);
    out << " p" << FormatNumber(q) << "=" << buf;
  }
  std::snprintf(buf, sizeof(buf), "%.3f", report.mean);
  out << " mean=" << buf << " (valid " << report.n_valid << ", undefined "
      << report.n_undefined << ")";
  return out.str();
}

std::string FormatMarkdownTable(std::span<const SuiteEntry> entries) {
  std::vector<double> columns = {5.0, 50.0, 95.0};
  for (const SuiteEntry& entry : entries) {
    if (entry.ok()) {
      columns = entry.config.percentiles;
      break;
    }
  }
  std::ostringstream out;
  out << "| # | System Model | Truth Model |";
  for (double q : columns) out << ' ' << OrdinalSuffix(q) << " |";
  out << "\n|---|---|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) out << "---:|";
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const SuiteEntry& entry = entries[i];
    out << "| " << i + 1 << " | " << entry.config.system_model.ToString()
        << " | " << entry.config.truth_model.ToString() << " |";
    if (entry.ok()) {
      for (double q : columns) {
        const auto& values = entry.report->percentile_values;
        auto it = std::find_if(values.begin(), values.end(),
                               [q](const auto& pv) { return pv.first == q; });
        if (it == values.end()) {
          out << " - |";
          continue;
        }
        std::snprintf(buf, sizeof(buf), "%.3f", it->second);
        out << ' ' << buf << " |";
      }
    } else {
      out << " error: " << entry.error << " |";
      for (std::size_t c = 1; c < columns.size(); ++c) out << " |";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace agreesim
