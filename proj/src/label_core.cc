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

#include "agreesim/label_core.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "agreesim/errors.h"
#include "json_util.h"

namespace agreesim {

using internal::Json;

namespace {

std::string Trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(ws);
  return std::string(s.substr(begin, end - begin + 1));
}

std::string LinePrefix(std::size_t line_no) {
  return "line " + std::to_string(line_no) + ": ";
}

std::vector<int> JsonLabels(const Json& record, std::size_t line_no) {
  if (!record.contains("labels") || !record.at("labels").is_array()) {
    throw ParseError(LinePrefix(line_no) + "missing \"labels\" array");
  }
  std::vector<int> labels;
  for (const Json& v : record.at("labels")) {
    if (!v.is_number_integer()) {
      throw ParseError(LinePrefix(line_no) + "labels must be integers");
    }
    labels.push_back(v.get<int>());
  }
  return labels;
}

Dataset LoadJsonl(std::istream& in, const LoadOptions& options) {
  std::optional<LabelScheme> header_scheme;
  std::vector<Document> documents;
  std::string line;
  std::size_t line_no = 0;
  bool seen_record = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = Trim(line);
    if (text.empty()) continue;
    Json record;
    try {
      record = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(LinePrefix(line_no) + "invalid JSON (" + e.what() + ")");
    }
    if (!record.is_object()) {
      throw ParseError(LinePrefix(line_no) + "expected a JSON object");
    }
    if (record.contains("scheme")) {
      if (seen_record) {
        throw ParseError(LinePrefix(line_no) +
                         "scheme header must be the first record");
      }
      try {
        header_scheme = internal::SchemeFromJsonValue(record);
      } catch (const ParseError& e) {
        throw ParseError(LinePrefix(line_no) + e.what());
      }
      seen_record = true;
      continue;
    }
    seen_record = true;
    if (!record.contains("doc_id") || !record.at("doc_id").is_string()) {
      throw ParseError(LinePrefix(line_no) + "missing string \"doc_id\"");
    }
    documents.push_back(
        {record.at("doc_id").get<std::string>(), JsonLabels(record, line_no)});
  }
  if (documents.empty()) throw ValidationError("empty dataset");
  std::optional<LabelScheme> scheme =
      options.scheme ? options.scheme : header_scheme;
  if (!scheme) {
    throw ConfigError(
        "no label scheme: add a scheme header record or supply a scheme file");
  }
  return Dataset(*scheme, std::move(documents));
}

std::vector<std::string> Split(const std::string& line, char delimiter) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, delimiter)) cells.push_back(Trim(cell));
  if (!line.empty() && line.back() == delimiter) cells.emplace_back();
  return cells;
}

Dataset LoadTabular(std::istream& in, const LoadOptions& options) {
  if (!options.scheme) {
    throw ConfigError("tabular datasets need a scheme file");
  }
  std::vector<Document> documents;
  char delimiter = options.delimiter;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    if (delimiter == 0) {
      delimiter = line.find('\t') != std::string::npos ? '\t' : ',';
    }
    const auto cells = Split(line, delimiter);
    if (cells.empty() || cells[0].empty()) {
      throw ParseError(LinePrefix(line_no) + "missing doc_id");
    }
    Document doc{cells[0], {}};
    for (std::size_t i = 1; i < cells.size(); ++i) {
      const std::string& cell = cells[i];
      if (cell.empty()) continue;
      int value = 0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (*first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc() || ptr != last) {
        throw ParseError(LinePrefix(line_no) + "label \"" + cell +
                         "\" is not an integer");
      }
      doc.labels.push_back(value);
    }
    documents.push_back(std::move(doc));
  }
  if (documents.empty()) throw ValidationError("empty dataset");
  return Dataset(*options.scheme, std::move(documents));
}

}  // namespace

LabelScheme::LabelScheme(std::vector<Label> labels, double positive_threshold)
    : labels_(std::move(labels)), positive_threshold_(positive_threshold) {
  if (labels_.size() < 2) {
    throw ValidationError("label scheme needs at least 2 labels");
  }
  std::sort(labels_.begin(), labels_.end(),
            [](const Label& a, const Label& b) { return a.value < b.value; });
  for (std::size_t i = 1; i < labels_.size(); ++i) {
    if (labels_[i].value == labels_[i - 1].value) {
      throw ValidationError("duplicate label value " +
                            std::to_string(labels_[i].value));
    }
  }
  if (!std::isfinite(positive_threshold_) ||
      !(positive_threshold_ > min_value() &&
        positive_threshold_ < max_value())) {
    throw ValidationError(
        "positive_threshold must lie strictly between the smallest and "
        "largest label values");
  }
}

std::optional<std::size_t> LabelScheme::IndexOf(int value) const {
  auto it = std::lower_bound(
      labels_.begin(), labels_.end(), value,
      [](const Label& label, int v) { return label.value < v; });
  if (it == labels_.end() || it->value != value) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

int LabelScheme::PositiveRepresentative() const {
  for (const Label& label : labels_) {
    if (label.value >= positive_threshold_) return label.value;
  }
  return max_value();  // unreachable given the constructor checks
}

int LabelScheme::NegativeRepresentative() const {
  for (auto it = labels_.rbegin(); it != labels_.rend(); ++it) {
    if (it->value < positive_threshold_) return it->value;
  }
  return min_value();
}

LabelScheme ControversyScheme() {
  return LabelScheme({{2, "Very Controversial"},
                      {1, "Controversial"},
                      {0, "Possibly Non-Controversial"},
                      {-1, "Clearly Non-Controversial"}},
                     0.5);
}

bool Binarize(double value, const LabelScheme& scheme) {
  return value >= scheme.positive_threshold();
}

Dataset::Dataset(LabelScheme scheme, std::vector<Document> documents)
    : scheme_(std::move(scheme)), documents_(std::move(documents)) {
  if (documents_.empty()) throw ValidationError("empty dataset");
  std::unordered_set<std::string> ids;
  for (const Document& doc : documents_) {
    if (!ids.insert(doc.doc_id).second) {
      throw ValidationError("duplicate doc_id \"" + doc.doc_id + "\"");
    }
    if (doc.labels.empty()) {
      throw ValidationError("document \"" + doc.doc_id + "\" has no labels");
    }
    for (int value : doc.labels) {
      if (!scheme_.Contains(value)) {
        throw ValidationError("document \"" + doc.doc_id + "\": label " +
                              std::to_string(value) + " is not in the scheme");
      }
    }
  }
}

DatasetFormat ParseDatasetFormat(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "jsonl" || lower == "json") return DatasetFormat::kJsonl;
  if (lower == "tabular" || lower == "tsv" || lower == "csv") {
    return DatasetFormat::kTabular;
  }
  throw ConfigError("unknown dataset format \"" + std::string(name) +
                    "\" (expected jsonl or tabular)");
}

DatasetFormat FormatFromPath(std::string_view path) {
  for (std::string_view ext : {".tsv", ".csv", ".txt"}) {
    if (path.size() >= ext.size() &&
        path.substr(path.size() - ext.size()) == ext) {
      return DatasetFormat::kTabular;
    }
  }
  return DatasetFormat::kJsonl;
}

Dataset LoadDataset(std::istream& in, DatasetFormat format,
                    const LoadOptions& options) {
  return format == DatasetFormat::kJsonl ? LoadJsonl(in, options)
                                         : LoadTabular(in, options);
}

Dataset LoadDatasetFile(const std::string& path, DatasetFormat format,
                        const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return LoadDataset(in, format, options);
}

void WriteJsonl(const Dataset& dataset, std::ostream& out) {
  Json header = Json::object();
  header["scheme"] = internal::SchemeToJsonValue(dataset.scheme());
  out << header.dump() << '\n';
  for (const Document& doc : dataset.documents()) {
    Json record = Json::object();
    record["doc_id"] = doc.doc_id;
    record["labels"] = doc.labels;
    out << record.dump() << '\n';
  }
}

std::string ToJsonl(const Dataset& dataset) {
  std::ostringstream out;
  WriteJsonl(dataset, out);
  return out.str();
}

LabelScheme ParseSchemeJson(std::string_view text) {
  Json value;
  try {
    value = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("scheme: invalid JSON (") + e.what() + ")");
  }
  return internal::SchemeFromJsonValue(value);
}

LabelScheme LoadSchemeFile(const std::string& path) {
  return ParseSchemeJson(internal::ReadFileToString(path));
}

std::string SchemeToJson(const LabelScheme& scheme) {
  return internal::SchemeToJsonValue(scheme).dump();
}

double AgreementProbability(const Dataset& dataset) {
  // Per document with n labels there are n(n-1) ordered pairs, of which
  // sum_v c_v(c_v-1) are concordant.
  uint64_t concordant = 0;
  uint64_t total = 0;
  for (const Document& doc : dataset.documents()) {
    const uint64_t n = doc.labels.size();
    if (n < 2) continue;
    std::map<int, uint64_t> counts;
    for (int v : doc.labels) ++counts[v];
    for (const auto& [value, c] : counts) concordant += c * (c - 1);
    total += n * (n - 1);
  }
  if (total == 0) {
    throw UndefinedError("agreement undefined: no document has two or more labels");
  }
  return static_cast<double>(concordant) / static_cast<double>(total);
}

}  // namespace agreesim
