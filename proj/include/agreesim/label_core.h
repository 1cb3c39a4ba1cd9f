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

// Label vocabulary, multi-annotator documents and dataset ingestion.
//
// A dataset is a flat list of documents, each carrying the anonymous
// multiset of ordinal labels its annotators assigned. Stored labels are
// always integers from the scheme; fractional values only ever appear in
// prediction assignments.

#ifndef AGREESIM_LABEL_CORE_H_
#define AGREESIM_LABEL_CORE_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agreesim {

struct Label {
  int value = 0;
  std::string name;

  bool operator==(const Label&) const = default;
};

// Ordered label vocabulary plus the boundary used to turn ordinal or
// fractional values into the binary classes needed by AUC-style metrics.
// Labels are kept in strictly increasing value order regardless of the
// order they were supplied in.
class LabelScheme {
 public:
  // Throws ValidationError unless there are at least two distinct values and
  // `positive_threshold` lies strictly between the smallest and largest.
  LabelScheme(std::vector<Label> labels, double positive_threshold);

  const std::vector<Label>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  double positive_threshold() const { return positive_threshold_; }
  int min_value() const { return labels_.front().value; }
  int max_value() const { return labels_.back().value; }

  // Position of `value` in the ascending label order.
  std::optional<std::size_t> IndexOf(int value) const;
  bool Contains(int value) const { return IndexOf(value).has_value(); }
  int ValueAt(std::size_t index) const { return labels_.at(index).value; }

  // Smallest label on the positive side of the threshold.
  int PositiveRepresentative() const;
  // Largest label on the negative side of the threshold.
  int NegativeRepresentative() const;

  bool operator==(const LabelScheme&) const = default;

 private:
  std::vector<Label> labels_;
  double positive_threshold_;
};

// Four-level controversy vocabulary (-1 clearly non-controversial up to 2
// very controversial) with the boundary at 0.5.
LabelScheme ControversyScheme();

// Positive iff `value >= scheme.positive_threshold()`.
bool Binarize(double value, const LabelScheme& scheme);

struct Document {
  std::string doc_id;
  std::vector<int> labels;

  bool operator==(const Document&) const = default;
};

class Dataset {
 public:
  // Throws ValidationError on an empty document list, duplicate ids, a
  // document without labels, or a label outside the scheme.
  Dataset(LabelScheme scheme, std::vector<Document> documents);

  const LabelScheme& scheme() const { return scheme_; }
  const std::vector<Document>& documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }
  const Document& operator[](std::size_t i) const { return documents_[i]; }

  bool operator==(const Dataset&) const = default;

 private:
  LabelScheme scheme_;
  std::vector<Document> documents_;
};

enum class DatasetFormat { kJsonl, kTabular };

// Parses "jsonl" / "tabular" (also "tsv", "csv").
DatasetFormat ParseDatasetFormat(std::string_view name);

// Format implied by a file extension; jsonl unless the extension is one of
// .tsv, .csv or .txt.
DatasetFormat FormatFromPath(std::string_view path);

struct LoadOptions {
  // Overrides any scheme header in a jsonl stream. Required for tabular.
  std::optional<LabelScheme> scheme;
  // Tabular column separator. 0 picks tab when the first record contains
  // one and comma otherwise.
  char delimiter = 0;
};

// Reads a dataset. Malformed records raise ParseError naming the line;
// invariant violations raise ValidationError naming the document.
Dataset LoadDataset(std::istream& in, DatasetFormat format,
                    const LoadOptions& options = {});
Dataset LoadDatasetFile(const std::string& path, DatasetFormat format,
                        const LoadOptions& options = {});

// Writes the jsonl form: a scheme header record followed by one record per
// document, in dataset order.
void WriteJsonl(const Dataset& dataset, std::ostream& out);
std::string ToJsonl(const Dataset& dataset);

// Scheme config: {"labels":[[2,"Very Controversial"],...],
// "positive_threshold":0.5}, optionally wrapped as {"scheme":{...}}.
LabelScheme ParseSchemeJson(std::string_view text);
LabelScheme LoadSchemeFile(const std::string& path);
std::string SchemeToJson(const LabelScheme& scheme);

// Pooled fraction of concordant ordered pairs of distinct annotator
// positions over all documents. Throws UndefinedError when no document has
// two or more labels.
double AgreementProbability(const Dataset& dataset);

}  // namespace agreesim

#endif  // AGREESIM_LABEL_CORE_H_
