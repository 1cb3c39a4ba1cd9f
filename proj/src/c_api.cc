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

#include "agreesim/agreesim.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "agreesim/conflation.h"
#include "agreesim/errors.h"
#include "agreesim/label_core.h"
#include "agreesim/metrics.h"
#include "agreesim/models.h"
#include "agreesim/simulate.h"
#include "agreesim/synth.h"
#include "json_util.h"

struct agreesim_dataset {
  agreesim::Dataset value;
};

struct agreesim_matrix {
  agreesim::ConflationMatrix value;
};

struct agreesim_report {
  agreesim::SimulationReport value;
};

struct agreesim_suite {
  std::vector<agreesim::SuiteEntry> entries;
  // Report handles borrowed out through agreesim_suite_report.
  std::vector<std::optional<agreesim_report>> reports;
};

namespace {

thread_local std::string last_error;

agreesim_status Fail(agreesim_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Fn>
agreesim_status Guard(Fn&& body) {
  try {
    body();
    return AGREESIM_OK;
  } catch (const agreesim::ParseError& e) {
    return Fail(AGREESIM_ERR_PARSE, e.what());
  } catch (const agreesim::ValidationError& e) {
    return Fail(AGREESIM_ERR_VALIDATION, e.what());
  } catch (const agreesim::ConfigError& e) {
    return Fail(AGREESIM_ERR_CONFIG, e.what());
  } catch (const agreesim::UndefinedError& e) {
    return Fail(AGREESIM_ERR_UNDEFINED, e.what());
  } catch (const agreesim::IoError& e) {
    return Fail(AGREESIM_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(AGREESIM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(AGREESIM_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(AGREESIM_ERR_INTERNAL, "unknown error");
  }
}

agreesim_status NullArgument(const char* name) {
  return Fail(AGREESIM_ERR_INVALID_ARGUMENT,
              std::string("null argument: ") + name);
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

agreesim::LoadOptions ToLoadOptions(const agreesim_load_options* options) {
  agreesim::LoadOptions out;
  if (options == nullptr) return out;
  if (options->scheme_path != nullptr) {
    out.scheme = agreesim::LoadSchemeFile(options->scheme_path);
  } else if (options->scheme_json != nullptr) {
    out.scheme = agreesim::ParseSchemeJson(options->scheme_json);
  }
  out.delimiter = options->delimiter;
  return out;
}

agreesim::SimulationConfig ToConfig(const agreesim_sim_options& options,
                                    bool need_models) {
  agreesim::SimulationConfig config;
  if (need_models) {
    if (options.system_model == nullptr || options.truth_model == nullptr) {
      throw agreesim::ConfigError("system and truth models are required");
    }
    config.system_model = agreesim::ParseModelSpec(options.system_model);
    config.truth_model = agreesim::ParseModelSpec(options.truth_model);
  }
  if (options.metric != nullptr) config.metric = options.metric;
  config.n_trials = options.n_trials;
  config.master_seed = options.seed;
  if (options.percentiles != nullptr) {
    config.percentiles.assign(options.percentiles,
                              options.percentiles + options.n_percentiles);
  }
  switch (options.flip_space) {
    case AGREESIM_FLIP_BINARY:
      config.flip_space = agreesim::FlipSpace::kBinary;
      break;
    case AGREESIM_FLIP_ORDINAL:
      config.flip_space = agreesim::FlipSpace::kOrdinal;
      break;
    default:
      throw agreesim::ConfigError("unknown flip space");
  }
  return config;
}

agreesim_suite* MakeSuite(std::vector<agreesim::SuiteEntry> entries) {
  auto* suite = new agreesim_suite{std::move(entries), {}};
  for (const auto& entry : suite->entries) {
    if (entry.ok()) {
      suite->reports.emplace_back(agreesim_report{*entry.report});
    } else {
      suite->reports.emplace_back(std::nullopt);
    }
  }
  return suite;
}

}  // namespace

extern "C" {

const char* agreesim_version(void) { return "1.0.0"; }

const char* agreesim_status_name(agreesim_status status) {
  switch (status) {
    case AGREESIM_OK: return "ok";
    case AGREESIM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case AGREESIM_ERR_PARSE: return "parse error";
    case AGREESIM_ERR_VALIDATION: return "validation error";
    case AGREESIM_ERR_CONFIG: return "configuration error";
    case AGREESIM_ERR_UNDEFINED: return "undefined";
    case AGREESIM_ERR_IO: return "i/o error";
    case AGREESIM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* agreesim_last_error(void) { return last_error.c_str(); }

void agreesim_string_free(char* str) { std::free(str); }

agreesim_status agreesim_write_file(const char* path, const char* data,
                                    size_t size) {
  if (path == nullptr) return NullArgument("path");
  if (data == nullptr && size > 0) return NullArgument("data");
  return Guard([&] {
    agreesim::internal::WriteFileAtomic(path,
                                        std::string(data ? data : "", size));
  });
}

agreesim_status agreesim_dataset_load_file(const char* path,
                                           const agreesim_load_options* options,
                                           agreesim_dataset** out) {
  if (path == nullptr) return NullArgument("path");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    const auto format =
        options != nullptr && options->format != nullptr
            ? agreesim::ParseDatasetFormat(options->format)
            : agreesim::FormatFromPath(path);
    *out = new agreesim_dataset{
        agreesim::LoadDatasetFile(path, format, ToLoadOptions(options))};
  });
}

agreesim_status agreesim_dataset_load_buffer(
    const char* data, size_t size, const agreesim_load_options* options,
    agreesim_dataset** out) {
  if (data == nullptr && size > 0) return NullArgument("data");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    const auto format = options != nullptr && options->format != nullptr
                            ? agreesim::ParseDatasetFormat(options->format)
                            : agreesim::DatasetFormat::kJsonl;
    std::istringstream in(std::string(data ? data : "", size));
    *out = new agreesim_dataset{
        agreesim::LoadDataset(in, format, ToLoadOptions(options))};
  });
}

void agreesim_dataset_free(agreesim_dataset* dataset) { delete dataset; }

size_t agreesim_dataset_size(const agreesim_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->value.size();
}

agreesim_status agreesim_dataset_to_jsonl(const agreesim_dataset* dataset,
                                          char** out) {
  if (dataset == nullptr) return NullArgument("dataset");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] { *out = CopyString(agreesim::ToJsonl(dataset->value)); });
}

agreesim_status agreesim_agreement(const agreesim_dataset* dataset,
                                   double* out) {
  if (dataset == nullptr) return NullArgument("dataset");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] { *out = agreesim::AgreementProbability(dataset->value); });
}

agreesim_status agreesim_matrix_learn(const agreesim_dataset* dataset,
                                      double smoothing,
                                      agreesim_matrix** out) {
  if (dataset == nullptr) return NullArgument("dataset");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    *out = new agreesim_matrix{
        agreesim::LearnConflation(dataset->value, smoothing)};
  });
}

agreesim_status agreesim_matrix_controversy_reference(agreesim_matrix** out) {
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    *out = new agreesim_matrix{agreesim::ControversyReferenceMatrix()};
  });
}

agreesim_status agreesim_matrix_load_file(const char* path,
                                          agreesim_matrix** out) {
  if (path == nullptr) return NullArgument("path");
  if (out == nullptr) return NullArgument("out");
  return Guard(
      [&] { *out = new agreesim_matrix{agreesim::LoadMatrixFile(path)}; });
}

agreesim_status agreesim_matrix_from_json(const char* json,
                                          agreesim_matrix** out) {
  if (json == nullptr) return NullArgument("json");
  if (out == nullptr) return NullArgument("out");
  return Guard(
      [&] { *out = new agreesim_matrix{agreesim::ParseMatrixJson(json)}; });
}

void agreesim_matrix_free(agreesim_matrix* matrix) { delete matrix; }

agreesim_status agreesim_matrix_to_json(const agreesim_matrix* matrix,
                                        char** out) {
  if (matrix == nullptr) return NullArgument("matrix");
  if (out == nullptr) return NullArgument("out");
  return Guard(
      [&] { *out = CopyString(agreesim::MatrixToJson(matrix->value)); });
}

agreesim_status agreesim_matrix_format_table(const agreesim_matrix* matrix,
                                             char** out) {
  if (matrix == nullptr) return NullArgument("matrix");
  if (out == nullptr) return NullArgument("out");
  return Guard(
      [&] { *out = CopyString(agreesim::FormatMatrixTable(matrix->value)); });
}

agreesim_status agreesim_matrix_agreement(const agreesim_matrix* matrix,
                                          double* out) {
  if (matrix == nullptr) return NullArgument("matrix");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] { *out = matrix->value.Agreement(); });
}

agreesim_status agreesim_matrix_row_distribution(const agreesim_matrix* matrix,
                                                 int value, double* probs,
                                                 size_t capacity,
                                                 size_t* written) {
  if (matrix == nullptr) return NullArgument("matrix");
  if (probs == nullptr) return NullArgument("probs");
  const std::vector<double>* row = nullptr;
  const agreesim_status status =
      Guard([&] { row = &matrix->value.RowDistributionFor(value); });
  if (status != AGREESIM_OK) return status;
  if (written != nullptr) *written = row->size();
  if (capacity < row->size()) {
    return Fail(AGREESIM_ERR_INVALID_ARGUMENT,
                "probs holds " + std::to_string(capacity) + " entries, " +
                    std::to_string(row->size()) + " needed");
  }
  std::copy(row->begin(), row->end(), probs);
  return AGREESIM_OK;
}

void agreesim_sim_options_init(agreesim_sim_options* options) {
  if (options == nullptr) return;
  *options = agreesim_sim_options{};
  options->system_model = "sample";
  options->truth_model = "average";
  options->metric = "auc";
  options->n_trials = agreesim::kDefaultTrials;
  options->seed = 0;
  options->percentiles = nullptr;
  options->n_percentiles = 0;
  options->flip_space = AGREESIM_FLIP_BINARY;
  options->jobs = 1;
}

agreesim_status agreesim_simulate(const agreesim_dataset* dataset,
                                  const agreesim_matrix* matrix,
                                  const agreesim_sim_options* options,
                                  agreesim_report** out) {
  if (dataset == nullptr) return NullArgument("dataset");
  if (options == nullptr) return NullArgument("options");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    const auto config = ToConfig(*options, /*need_models=*/true);
    *out = new agreesim_report{agreesim::RunSimulation(
        config, dataset->value, matrix ? &matrix->value : nullptr,
        agreesim::RunOptions{options->jobs})};
  });
}

void agreesim_report_free(agreesim_report* report) { delete report; }

agreesim_status agreesim_report_to_json(const agreesim_report* report,
                                        char** out) {
  if (report == nullptr) return NullArgument("report");
  if (out == nullptr) return NullArgument("out");
  return Guard(
      [&] { *out = CopyString(agreesim::ReportToJson(report->value)); });
}

agreesim_status agreesim_report_summary(const agreesim_report* report,
                                        char** out) {
  if (report == nullptr) return NullArgument("report");
  if (out == nullptr) return NullArgument("out");
  return Guard(
      [&] { *out = CopyString(agreesim::FormatSummary(report->value)); });
}

agreesim_status agreesim_report_samples_text(const agreesim_report* report,
                                             char** out) {
  if (report == nullptr) return NullArgument("report");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    *out = CopyString(agreesim::SamplesToText(report->value.samples));
  });
}

agreesim_status agreesim_report_percentile(const agreesim_report* report,
                                           double q, double* out) {
  if (report == nullptr) return NullArgument("report");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] { *out = report->value.PercentileValue(q); });
}

double agreesim_report_mean(const agreesim_report* report) {
  return report == nullptr ? 0.0 : report->value.mean;
}

uint64_t agreesim_report_n_valid(const agreesim_report* report) {
  return report == nullptr ? 0 : report->value.n_valid;
}

uint64_t agreesim_report_n_undefined(const agreesim_report* report) {
  return report == nullptr ? 0 : report->value.n_undefined;
}

const double* agreesim_report_samples(const agreesim_report* report,
                                      size_t* count) {
  if (report == nullptr) {
    if (count != nullptr) *count = 0;
    return nullptr;
  }
  if (count != nullptr) *count = report->value.samples.size();
  return report->value.samples.data();
}

agreesim_status agreesim_suite_run_preset(const agreesim_dataset* dataset,
                                          const agreesim_matrix* matrix,
                                          const char* preset,
                                          const agreesim_sim_options* defaults,
                                          agreesim_suite** out) {
  if (dataset == nullptr) return NullArgument("dataset");
  if (preset == nullptr) return NullArgument("preset");
  if (defaults == nullptr) return NullArgument("defaults");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    const auto configs = agreesim::LookupPreset(
        preset, ToConfig(*defaults, /*need_models=*/false));
    *out = MakeSuite(agreesim::RunSuite(configs, dataset->value,
                                        matrix ? &matrix->value : nullptr,
                                        agreesim::RunOptions{defaults->jobs}));
  });
}

agreesim_status agreesim_suite_run_config(const agreesim_dataset* dataset,
                                          const agreesim_matrix* matrix,
                                          const char* config_json,
                                          const agreesim_sim_options* defaults,
                                          agreesim_suite** out) {
  if (dataset == nullptr) return NullArgument("dataset");
  if (config_json == nullptr) return NullArgument("config_json");
  if (defaults == nullptr) return NullArgument("defaults");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    const auto configs = agreesim::ParseSuiteConfigJson(
        config_json, ToConfig(*defaults, /*need_models=*/false));
    *out = MakeSuite(agreesim::RunSuite(configs, dataset->value,
                                        matrix ? &matrix->value : nullptr,
                                        agreesim::RunOptions{defaults->jobs}));
  });
}

void agreesim_suite_free(agreesim_suite* suite) { delete suite; }

size_t agreesim_suite_size(const agreesim_suite* suite) {
  return suite == nullptr ? 0 : suite->entries.size();
}

size_t agreesim_suite_failed(const agreesim_suite* suite) {
  if (suite == nullptr) return 0;
  size_t failed = 0;
  for (const auto& entry : suite->entries) {
    if (!entry.ok()) ++failed;
  }
  return failed;
}

const agreesim_report* agreesim_suite_report(const agreesim_suite* suite,
                                             size_t index) {
  if (suite == nullptr || index >= suite->reports.size() ||
      !suite->reports[index]) {
    return nullptr;
  }
  return &*suite->reports[index];
}

const char* agreesim_suite_error(const agreesim_suite* suite, size_t index) {
  if (suite == nullptr || index >= suite->entries.size() ||
      suite->entries[index].ok()) {
    return nullptr;
  }
  return suite->entries[index].error.c_str();
}

agreesim_status agreesim_suite_to_json(const agreesim_suite* suite,
                                       char** out) {
  if (suite == nullptr) return NullArgument("suite");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] { *out = CopyString(agreesim::SuiteToJson(suite->entries)); });
}

agreesim_status agreesim_suite_markdown(const agreesim_suite* suite,
                                        char** out) {
  if (suite == nullptr) return NullArgument("suite");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    *out = CopyString(agreesim::FormatMarkdownTable(suite->entries));
  });
}

agreesim_status agreesim_percentile(const double* samples, size_t count,
                                    double q, double* out) {
  if (samples == nullptr && count > 0) return NullArgument("samples");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    *out = agreesim::Percentile(std::span<const double>(samples, count), q);
  });
}

agreesim_status agreesim_assess(double score, const double* samples,
                                size_t count, double low, double high,
                                double* percentile_rank,
                                agreesim_verdict* verdict) {
  if (samples == nullptr && count > 0) return NullArgument("samples");
  if (percentile_rank == nullptr) return NullArgument("percentile_rank");
  if (verdict == nullptr) return NullArgument("verdict");
  return Guard([&] {
    const auto result = agreesim::AssessClaim(
        score, std::span<const double>(samples, count), low, high);
    *percentile_rank = result.percentile_rank;
    switch (result.verdict) {
      case agreesim::Verdict::kBelowBand: *verdict = AGREESIM_BELOW_BAND; break;
      case agreesim::Verdict::kWithinBand: *verdict = AGREESIM_WITHIN_BAND; break;
      case agreesim::Verdict::kAboveBand: *verdict = AGREESIM_ABOVE_BAND; break;
    }
  });
}

const char* agreesim_verdict_name(agreesim_verdict verdict) {
  switch (verdict) {
    case AGREESIM_BELOW_BAND: return "below_band";
    case AGREESIM_WITHIN_BAND: return "within_band";
    case AGREESIM_ABOVE_BAND: return "above_band";
  }
  return "unknown";
}

agreesim_status agreesim_samples_load_file(const char* path, double** samples,
                                           size_t* count) {
  if (path == nullptr) return NullArgument("path");
  if (samples == nullptr) return NullArgument("samples");
  if (count == nullptr) return NullArgument("count");
  return Guard([&] {
    const auto values = agreesim::ParseSamplesText(
        agreesim::internal::ReadFileToString(path));
    auto* buffer =
        static_cast<double*>(std::malloc(values.size() * sizeof(double)));
    if (buffer == nullptr) throw std::bad_alloc();
    std::copy(values.begin(), values.end(), buffer);
    *samples = buffer;
    *count = values.size();
  });
}

void agreesim_samples_free(double* samples) { std::free(samples); }

agreesim_status agreesim_metric(const char* name, const uint8_t* truth,
                                const double* scores, size_t count,
                                const char* scheme_json, double* out) {
  if (name == nullptr) return NullArgument("name");
  if ((truth == nullptr || scores == nullptr) && count > 0) {
    return NullArgument("truth/scores");
  }
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    const agreesim::LabelScheme scheme =
        scheme_json != nullptr ? agreesim::ParseSchemeJson(scheme_json)
                               : agreesim::ControversyScheme();
    const agreesim::MetricFn& fn = agreesim::LookupMetric(name);
    *out = fn(agreesim::MetricInput{std::span<const uint8_t>(truth, count),
                                    std::span<const double>(scores, count)},
              scheme);
  });
}

void agreesim_synth_options_init(agreesim_synth_options* options) {
  if (options == nullptr) return;
  *options = agreesim_synth_options{};
  options->n_docs = 343;
}

agreesim_status agreesim_synth_generate(const agreesim_synth_options* options,
                                        agreesim_dataset** out) {
  if (options == nullptr) return NullArgument("options");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    agreesim::SynthConfig config;
    config.n_docs = options->n_docs;
    config.seed = options->seed;
    if (options->annotator_counts != nullptr) {
      config.annotators.clear();
      for (size_t i = 0; i < options->n_annotator_options; ++i) {
        const double weight = options->annotator_weights != nullptr
                                  ? options->annotator_weights[i]
                                  : 1.0;
        config.annotators.emplace_back(options->annotator_counts[i], weight);
      }
    }
    if (options->matrix != nullptr) {
      config.scheme = options->matrix->value.scheme();
      config.mode = agreesim::MatrixCalibratedMode{options->matrix->value};
    } else {
      if (options->alpha == nullptr) {
        throw agreesim::ConfigError(
            "synth needs a calibration matrix or dirichlet alpha");
      }
      if (options->scheme_json != nullptr) {
        config.scheme = agreesim::ParseSchemeJson(options->scheme_json);
      }
      config.mode = agreesim::DirichletMode{std::vector<double>(
          options->alpha, options->alpha + options->n_alpha)};
    }
    *out = new agreesim_dataset{agreesim::Generate(config)};
  });
}

}  // extern "C"
