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

#include "cli_app.h"

#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "agreesim/agreesim.h"

namespace agreesim::cli {

namespace {

// Failure reported by a subcommand; printed as "agreesim: <message>".
class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void Check(agreesim_status status, const std::string& context = {}) {
  if (status == AGREESIM_OK) return;
  std::string message = agreesim_status_name(status);
  message += ": ";
  if (!context.empty()) message += context + ": ";
  message += agreesim_last_error();
  throw CliError(message);
}

struct DatasetDeleter {
  void operator()(agreesim_dataset* d) const { agreesim_dataset_free(d); }
};
struct MatrixDeleter {
  void operator()(agreesim_matrix* m) const { agreesim_matrix_free(m); }
};
struct ReportDeleter {
  void operator()(agreesim_report* r) const { agreesim_report_free(r); }
};
struct SuiteDeleter {
  void operator()(agreesim_suite* s) const { agreesim_suite_free(s); }
};
using DatasetPtr = std::unique_ptr<agreesim_dataset, DatasetDeleter>;
using MatrixPtr = std::unique_ptr<agreesim_matrix, MatrixDeleter>;
using ReportPtr = std::unique_ptr<agreesim_report, ReportDeleter>;
using SuitePtr = std::unique_ptr<agreesim_suite, SuiteDeleter>;

// Takes ownership of a string produced by the library.
std::string Take(char* s) {
  std::string out = s ? s : "";
  agreesim_string_free(s);
  return out;
}

char ParseDelimiter(const std::string& text) {
  if (text.empty()) return 0;
  if (text == "tab" || text == "\\t") return '\t';
  if (text == "comma") return ',';
  if (text.size() != 1) {
    throw CliError("--delimiter must be a single character, 'tab' or 'comma'");
  }
  return text[0];
}

DatasetPtr LoadDataset(const Invocation& inv) {
  agreesim_load_options options{};
  options.format = inv.format.empty() ? nullptr : inv.format.c_str();
  options.scheme_path = inv.scheme.empty() ? nullptr : inv.scheme.c_str();
  options.delimiter = ParseDelimiter(inv.delimiter);
  agreesim_dataset* dataset = nullptr;
  Check(agreesim_dataset_load_file(inv.dataset.c_str(), &options, &dataset),
        inv.dataset);
  return DatasetPtr(dataset);
}

MatrixPtr LoadNamedMatrix(const std::string& name) {
  agreesim_matrix* matrix = nullptr;
  if (name == "controversy") {
    Check(agreesim_matrix_controversy_reference(&matrix));
  } else {
    Check(agreesim_matrix_load_file(name.c_str(), &matrix), name);
  }
  return MatrixPtr(matrix);
}

// An explicit --matrix, else one learned from the dataset when it has
// annotator pairs. Models that need a matrix fail later if neither exists.
MatrixPtr ResolveMatrix(const Invocation& inv, const agreesim_dataset* data) {
  if (!inv.matrix.empty()) return LoadNamedMatrix(inv.matrix);
  agreesim_matrix* matrix = nullptr;
  if (agreesim_matrix_learn(data, inv.smoothing, &matrix) == AGREESIM_OK) {
    return MatrixPtr(matrix);
  }
  return nullptr;
}

agreesim_sim_options SimOptions(const Invocation& inv) {
  agreesim_sim_options options;
  agreesim_sim_options_init(&options);
  options.system_model = inv.system_model.c_str();
  options.truth_model = inv.truth_model.c_str();
  options.metric = inv.metric.c_str();
  options.n_trials = inv.trials;
  options.seed = inv.seed;
  options.percentiles = inv.percentiles.data();
  options.n_percentiles = inv.percentiles.size();
  if (inv.flip_space == "binary") {
    options.flip_space = AGREESIM_FLIP_BINARY;
  } else if (inv.flip_space == "ordinal") {
    options.flip_space = AGREESIM_FLIP_ORDINAL;
  } else {
    throw CliError("--flip-space must be binary or ordinal");
  }
  options.jobs = inv.jobs;
  return options;
}

void WriteFile(const std::string& path, const std::string& contents) {
  Check(agreesim_write_file(path.c_str(), contents.data(), contents.size()),
        path);
}

void RunSimulate(const Invocation& inv, std::ostream& out) {
  DatasetPtr dataset = LoadDataset(inv);
  MatrixPtr matrix = ResolveMatrix(inv, dataset.get());
  const agreesim_sim_options options = SimOptions(inv);
  agreesim_report* raw = nullptr;
  Check(agreesim_simulate(dataset.get(), matrix.get(), &options, &raw));
  ReportPtr report(raw);

  char* text = nullptr;
  if (!inv.samples_out.empty()) {
    Check(agreesim_report_samples_text(report.get(), &text));
    WriteFile(inv.samples_out, Take(text));
  }
  if (!inv.out.empty()) {
    Check(agreesim_report_to_json(report.get(), &text));
    WriteFile(inv.out, Take(text));
  }
  Check(agreesim_report_summary(report.get(), &text));
  out << Take(text) << '\n';
}

void RunSuite(const Invocation& inv, std::ostream& out) {
  if (inv.preset.empty() == inv.config.empty()) {
    throw CliError("suite needs exactly one of --preset or --config");
  }
  DatasetPtr dataset = LoadDataset(inv);
  MatrixPtr matrix = ResolveMatrix(inv, dataset.get());
  const agreesim_sim_options defaults = SimOptions(inv);
  agreesim_suite* raw = nullptr;
  if (!inv.preset.empty()) {
    Check(agreesim_suite_run_preset(dataset.get(), matrix.get(),
                                    inv.preset.c_str(), &defaults, &raw));
  } else {
    std::ifstream in(inv.config);
    if (!in) throw CliError("cannot open " + inv.config);
    std::stringstream text;
    text << in.rdbuf();
    Check(agreesim_suite_run_config(dataset.get(), matrix.get(),
                                    text.str().c_str(), &defaults, &raw),
          inv.config);
  }
  SuitePtr suite(raw);

  char* text = nullptr;
  Check(agreesim_suite_markdown(suite.get(), &text));
  const std::string table = Take(text);
  out << table;

  const std::size_t failed = agreesim_suite_failed(suite.get());
  if (failed > 0) {
    throw CliError(std::to_string(failed) + " of " +
                   std::to_string(agreesim_suite_size(suite.get())) +
                   " suite configs failed; no output files written");
  }
  if (!inv.samples_dir.empty()) {
    for (std::size_t i = 0; i < agreesim_suite_size(suite.get()); ++i) {
      Check(agreesim_report_samples_text(agreesim_suite_report(suite.get(), i),
                                         &text));
      WriteFile(inv.samples_dir + "/row" + std::to_string(i + 1) + ".samples",
                Take(text));
    }
  }
  if (!inv.markdown_out.empty()) WriteFile(inv.markdown_out, table);
  if (!inv.out.empty()) {
    Check(agreesim_suite_to_json(suite.get(), &text));
    WriteFile(inv.out, Take(text));
  }
}

void RunAgreement(const Invocation& inv, std::ostream& out) {
  DatasetPtr dataset = LoadDataset(inv);
  double agreement = 0.0;
  Check(agreesim_agreement(dataset.get(), &agreement));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", agreement);
  out << buf << '\n';
}

void RunConflation(const Invocation& inv, std::ostream& out) {
  DatasetPtr dataset = LoadDataset(inv);
  agreesim_matrix* raw = nullptr;
  Check(agreesim_matrix_learn(dataset.get(), inv.smoothing, &raw));
  MatrixPtr matrix(raw);
  char* text = nullptr;
  if (!inv.out.empty()) {
    Check(agreesim_matrix_to_json(matrix.get(), &text));
    WriteFile(inv.out, Take(text));
  }
  Check(agreesim_matrix_format_table(matrix.get(), &text));
  out << Take(text);
  double agreement = 0.0;
  Check(agreesim_matrix_agreement(matrix.get(), &agreement));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", agreement);
  out << "agreement: " << buf << '\n';
}

void RunAssess(const Invocation& inv, std::ostream& out) {
  double* samples = nullptr;
  std::size_t count = 0;
  Check(agreesim_samples_load_file(inv.samples.c_str(), &samples, &count),
        inv.samples);
  std::unique_ptr<double, void (*)(double*)> owned(samples,
                                                   agreesim_samples_free);
  double rank = 0.0;
  agreesim_verdict verdict = AGREESIM_WITHIN_BAND;
  Check(agreesim_assess(inv.score, samples, count, inv.band_low, inv.band_high,
                        &rank, &verdict));
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "score=%.6g percentile_rank=%.4f verdict=%s band=[%g,%g]",
                inv.score, rank, agreesim_verdict_name(verdict), inv.band_low,
                inv.band_high);
  out << buf << '\n';
}

std::vector<std::pair<int, double>> ParseAnnotatorDist(const std::string& s) {
  std::vector<std::pair<int, double>> dist;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) {
        dist.emplace_back(std::stoi(item), 1.0);
      } else {
        dist.emplace_back(std::stoi(item.substr(0, colon)),
                          std::stod(item.substr(colon + 1)));
      }
    } catch (const std::exception&) {
      throw CliError("--annotator-dist entries must look like COUNT:WEIGHT");
    }
  }
  if (dist.empty()) throw CliError("--annotator-dist is empty");
  return dist;
}

void RunSynth(const Invocation& inv, std::ostream& out) {
  agreesim_synth_options options;
  agreesim_synth_options_init(&options);
  options.n_docs = inv.docs;
  options.seed = inv.seed;

  std::vector<int> counts;
  std::vector<double> weights;
  if (!inv.annotator_dist.empty()) {
    for (const auto& [count, weight] : ParseAnnotatorDist(inv.annotator_dist)) {
      counts.push_back(count);
      weights.push_back(weight);
    }
  } else {
    counts.push_back(inv.annotators);
    weights.push_back(1.0);
  }
  options.annotator_counts = counts.data();
  options.annotator_weights = weights.data();
  options.n_annotator_options = counts.size();

  MatrixPtr matrix;
  std::string scheme_json;
  if (inv.mode == "calibrated") {
    matrix = LoadNamedMatrix(inv.matrix.empty() ? "controversy" : inv.matrix);
    options.matrix = matrix.get();
  } else if (inv.mode == "dirichlet") {
    if (inv.alpha.empty()) throw CliError("dirichlet mode needs --alpha");
    options.alpha = inv.alpha.data();
    options.n_alpha = inv.alpha.size();
    if (!inv.scheme.empty()) {
      std::ifstream in(inv.scheme);
      if (!in) throw CliError("cannot open " + inv.scheme);
      std::stringstream text;
      text << in.rdbuf();
      scheme_json = text.str();
      options.scheme_json = scheme_json.c_str();
    }
  } else {
    throw CliError("--mode must be calibrated or dirichlet");
  }

  agreesim_dataset* raw = nullptr;
  Check(agreesim_synth_generate(&options, &raw));
  DatasetPtr dataset(raw);
  char* text = nullptr;
  Check(agreesim_dataset_to_jsonl(dataset.get(), &text));
  const std::string jsonl = Take(text);
  if (inv.out.empty()) {
    out << jsonl;
  } else {
    WriteFile(inv.out, jsonl);
    out << "wrote " << agreesim_dataset_size(dataset.get()) << " documents to "
        << inv.out << '\n';
  }
}

void AddDatasetFlags(CLI::App* sub, Invocation& inv) {
  sub->add_option("dataset", inv.dataset, "Dataset file (jsonl or tabular)")
      ->required();
  sub->add_option("--format", inv.format,
                  "Dataset format: jsonl or tabular (default: from extension)");
  sub->add_option("--scheme", inv.scheme, "Label scheme JSON sidecar file");
  sub->add_option("--delimiter", inv.delimiter,
                  "Tabular column separator: one character, tab or comma");
}

void AddSimulationFlags(CLI::App* sub, Invocation& inv) {
  sub->add_option("--metric", inv.metric, "Metric: auc, accuracy or f1")
      ->capture_default_str();
  sub->add_option("--trials", inv.trials, "Number of Monte Carlo trials")
      ->capture_default_str();
  sub->add_option("--seed", inv.seed, "Master random seed")->required();
  sub->add_option("--jobs", inv.jobs,
                  "Worker threads (0 = all cores); does not change results")
      ->capture_default_str();
  sub->add_option("--percentiles", inv.percentiles,
                  "Comma-separated percentiles to report")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--flip-space", inv.flip_space,
                  "Flip labels between binary classes or ordinal labels")
      ->capture_default_str();
  sub->add_option("--matrix", inv.matrix,
                  "Conflation matrix JSON file, or 'controversy' for the "
                  "reference counts (default: learned from the dataset)");
  sub->add_option("--smoothing", inv.smoothing,
                  "Add-alpha smoothing when learning the conflation matrix")
      ->capture_default_str();
}

}  // namespace

void BuildApp(CLI::App& app, Invocation& inv) {
  app.description(
      "Simulate what annotator disagreement implies for evaluation scores.");
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand(
      "simulate", "Run one system/truth model pairing and report percentiles");
  AddDatasetFlags(simulate, inv);
  simulate->add_option("--system", inv.system_model, "System model spec")
      ->required();
  simulate->add_option("--truth", inv.truth_model, "Truth model spec")
      ->required();
  AddSimulationFlags(simulate, inv);
  simulate->add_option("--out", inv.out, "Write the JSON report here");
  simulate->add_option("--samples-out", inv.samples_out,
                       "Write the sorted metric samples here");

  auto* suite = app.add_subcommand(
      "suite", "Run a preset or a config file of pairings as a table");
  AddDatasetFlags(suite, inv);
  suite->add_option("--preset", inv.preset, "Built-in pairing set: table2");
  suite->add_option("--config", inv.config, "Suite config JSON file");
  AddSimulationFlags(suite, inv);
  suite->add_option("--out", inv.out, "Write the JSON reports here");
  suite->add_option("--markdown-out", inv.markdown_out,
                    "Write the markdown table here");
  suite->add_option("--samples-dir", inv.samples_dir,
                    "Write rowN.samples dumps into this existing directory");

  auto* agreement = app.add_subcommand(
      "agreement", "Print the pooled pairwise annotator agreement");
  AddDatasetFlags(agreement, inv);

  auto* conflation = app.add_subcommand(
      "conflation", "Learn and print the label conflation matrix");
  AddDatasetFlags(conflation, inv);
  conflation->add_option("--out", inv.out, "Write the matrix JSON here");
  conflation->add_option("--smoothing", inv.smoothing,
                         "Add-alpha smoothing of the row distributions")
      ->capture_default_str();

  auto* assess = app.add_subcommand(
      "assess", "Place a published score within simulated samples");
  assess->add_option("--score", inv.score, "Score to assess")->required();
  assess->add_option("--samples", inv.samples, "Samples dump file")
      ->required();
  assess->add_option("--low", inv.band_low, "Lower band percentile")
      ->capture_default_str();
  assess->add_option("--high", inv.band_high, "Upper band percentile")
      ->capture_default_str();

  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic multi-annotator dataset (jsonl)");
  synth->add_option("--docs", inv.docs, "Number of documents")
      ->capture_default_str();
  synth->add_option("--annotators", inv.annotators,
                    "Annotators per document")
      ->capture_default_str();
  synth->add_option("--annotator-dist", inv.annotator_dist,
                    "Annotator count distribution, e.g. 2:0.4,3:0.6");
  synth->add_option("--mode", inv.mode, "calibrated or dirichlet")
      ->capture_default_str();
  synth->add_option("--matrix", inv.matrix,
                    "Calibration matrix JSON file or 'controversy'");
  synth->add_option("--alpha", inv.alpha,
                    "Dirichlet concentrations, one per label (ascending)")
      ->delimiter(',');
  synth->add_option("--scheme", inv.scheme,
                    "Label scheme JSON file for dirichlet mode");
  synth->add_option("--seed", inv.seed, "Random seed")->required();
  synth->add_option("--out", inv.out,
                    "Write the dataset here (default: standard output)");
}

std::vector<FlagExample> DocumentedFlags() {
  std::vector<FlagExample> flags;
  const std::vector<std::pair<std::string, std::string>> dataset_flags = {
      {"--format", "jsonl"}, {"--scheme", "scheme.json"}, {"--delimiter", "tab"}};
  const std::vector<std::pair<std::string, std::string>> sim_flags = {
      {"--metric", "auc"},        {"--trials", "10"},
      {"--seed", "1"},            {"--jobs", "2"},
      {"--percentiles", "5,50,95"}, {"--flip-space", "ordinal"},
      {"--matrix", "controversy"}, {"--smoothing", "0.5"}};
  for (const char* sub : {"simulate", "suite", "agreement", "conflation"}) {
    for (const auto& [flag, value] : dataset_flags) {
      flags.push_back({sub, flag, value});
    }
  }
  for (const char* sub : {"simulate", "suite"}) {
    for (const auto& [flag, value] : sim_flags) flags.push_back({sub, flag, value});
  }
  flags.push_back({"simulate", "--system", "sample"});
  flags.push_back({"simulate", "--truth", "average"});
  flags.push_back({"simulate", "--out", "report.json"});
  flags.push_back({"simulate", "--samples-out", "report.samples"});
  flags.push_back({"suite", "--preset", "table2"});
  flags.push_back({"suite", "--config", "suite.json"});
  flags.push_back({"suite", "--out", "suite.json"});
  flags.push_back({"suite", "--markdown-out", "table.md"});
  flags.push_back({"suite", "--samples-dir", "."});
  flags.push_back({"conflation", "--out", "matrix.json"});
  flags.push_back({"conflation", "--smoothing", "1"});
  flags.push_back({"assess", "--score", "0.856"});
  flags.push_back({"assess", "--samples", "row1.samples"});
  flags.push_back({"assess", "--low", "2.5"});
  flags.push_back({"assess", "--high", "97.5"});
  flags.push_back({"synth", "--docs", "10"});
  flags.push_back({"synth", "--annotators", "2"});
  flags.push_back({"synth", "--annotator-dist", "2:1,3:1"});
  flags.push_back({"synth", "--mode", "dirichlet"});
  flags.push_back({"synth", "--matrix", "controversy"});
  flags.push_back({"synth", "--alpha", "1,1,1,1"});
  flags.push_back({"synth", "--scheme", "scheme.json"});
  flags.push_back({"synth", "--seed", "3"});
  flags.push_back({"synth", "--out", "data.jsonl"});
  return flags;
}

std::vector<std::string> MinimalArgs(const std::string& subcommand) {
  if (subcommand == "simulate") {
    return {"data.jsonl", "--system", "sample", "--truth", "average",
            "--seed", "1"};
  }
  if (subcommand == "suite") return {"data.jsonl", "--seed", "1"};
  if (subcommand == "agreement" || subcommand == "conflation") {
    return {"data.jsonl"};
  }
  if (subcommand == "assess") {
    return {"--score", "0.5", "--samples", "row1.samples"};
  }
  if (subcommand == "synth") return {"--seed", "1"};
  return {};
}

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"agreesim", "agreesim"};
  Invocation inv;
  BuildApp(app, inv);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help exits 0; every other parse failure is a usage error.
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }
  try {
    if (app.got_subcommand("simulate")) {
      RunSimulate(inv, out);
    } else if (app.got_subcommand("suite")) {
      RunSuite(inv, out);
    } else if (app.got_subcommand("agreement")) {
      RunAgreement(inv, out);
    } else if (app.got_subcommand("conflation")) {
      RunConflation(inv, out);
    } else if (app.got_subcommand("assess")) {
      RunAssess(inv, out);
    } else if (app.got_subcommand("synth")) {
      RunSynth(inv, out);
    }
  } catch (const std::exception& e) {
    out.flush();
    err << "agreesim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace agreesim::cli
