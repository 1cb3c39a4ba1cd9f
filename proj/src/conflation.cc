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

#include "agreesim/conflation.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "agreesim/errors.h"
#include "json_util.h"

namespace agreesim {

using internal::Json;

ConflationMatrix::ConflationMatrix(LabelScheme scheme, Counts counts,
                                   double smoothing)
    : scheme_(std::move(scheme)),
      counts_(std::move(counts)),
      smoothing_(smoothing) {
  const std::size_t k = scheme_.size();
  if (counts_.size() != k) {
    throw ValidationError("conflation matrix must be " + std::to_string(k) +
                          "x" + std::to_string(k) + " for this scheme");
  }
  for (const auto& row : counts_) {
    if (row.size() != k) {
      throw ValidationError("conflation matrix rows must have " +
                            std::to_string(k) + " entries");
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (counts_[a][b] != counts_[b][a]) {
        throw ValidationError("conflation counts must be symmetric");
      }
    }
  }
  if (!(smoothing_ >= 0.0) || !std::isfinite(smoothing_)) {
    throw ValidationError("smoothing must be a finite non-negative number");
  }

  row_probs_.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t a = 0; a < k; ++a) {
    const double mass =
        static_cast<double>(RowSum(a)) + smoothing_ * static_cast<double>(k);
    if (mass <= 0.0) {
      row_probs_[a][a] = 1.0;
      continue;
    }
    for (std::size_t b = 0; b < k; ++b) {
      row_probs_[a][b] =
          (static_cast<double>(counts_[a][b]) + smoothing_) / mass;
    }
  }
}

uint64_t ConflationMatrix::Total() const {
  uint64_t total = 0;
  for (std::size_t a = 0; a < size(); ++a) total += RowSum(a);
  return total;
}

uint64_t ConflationMatrix::Trace() const {
  uint64_t trace = 0;
  for (std::size_t a = 0; a < size(); ++a) trace += counts_[a][a];
  return trace;
}

uint64_t ConflationMatrix::RowSum(std::size_t row) const {
  uint64_t sum = 0;
  for (uint64_t c : counts_.at(row)) sum += c;
  return sum;
}

const std::vector<double>& ConflationMatrix::RowDistributionFor(
    int value) const {
  const auto index = scheme_.IndexOf(value);
  if (!index) {
    throw ValidationError("label " + std::to_string(value) +
                          " is not in the scheme");
  }
  return row_probs_[*index];
}

int ConflationMatrix::SampleConflated(int value, Rng& rng) const {
  return scheme_.ValueAt(rng.Categorical(RowDistributionFor(value)));
}

double ConflationMatrix::Agreement() const {
  const uint64_t total = Total();
  if (total == 0) throw UndefinedError("agreement undefined: empty matrix");
  return static_cast<double>(Trace()) / static_cast<double>(total);
}

bool ConflationMatrix::IsIdentityLike() const {
  for (std::size_t a = 0; a < size(); ++a) {
    for (std::size_t b = 0; b < size(); ++b) {
      if (a != b && row_probs_[a][b] != 0.0) return false;
    }
  }
  return true;
}

ConflationMatrix LearnConflation(const Dataset& dataset, double smoothing) {
  const LabelScheme& scheme = dataset.scheme();
  const std::size_t k = scheme.size();
  ConflationMatrix::Counts counts(k, std::vector<uint64_t>(k, 0));
  bool any_pair = false;
  std::vector<std::size_t> index;
  for (const Document& doc : dataset.documents()) {
    if (doc.labels.size() < 2) continue;
    any_pair = true;
    index.clear();
    for (int v : doc.labels) index.push_back(*scheme.IndexOf(v));
    for (std::size_t i = 0; i < index.size(); ++i) {
      for (std::size_t j = 0; j < index.size(); ++j) {
        if (i != j) ++counts[index[i]][index[j]];
      }
    }
  }
  if (!any_pair) {
    throw UndefinedError(
        "conflation unlearnable: no document has two or more labels");
  }
  return ConflationMatrix(scheme, std::move(counts), smoothing);
}

ConflationMatrix ControversyReferenceMatrix() {
  // Ascending order: -1, 0, 1, 2.
  return ConflationMatrix(ControversyScheme(), {{594, 92, 53, 48},
                                                {92, 133, 27, 23},
                                                {53, 27, 182, 83},
                                                {48, 23, 83, 237}});
}

std::string MatrixToJson(const ConflationMatrix& matrix) {
  Json out = internal::SchemeToJsonValue(matrix.scheme());
  const std::size_t k = matrix.size();
  Json grid = Json::array();
  for (std::size_t a = k; a-- > 0;) {
    Json row = Json::array();
    for (std::size_t b = k; b-- > 0;) row.push_back(matrix.counts()[a][b]);
    grid.push_back(std::move(row));
  }
  out["counts"] = std::move(grid);
  if (matrix.smoothing() != 0.0) out["smoothing"] = matrix.smoothing();
  return out.dump(2) + "\n";
}

ConflationMatrix ParseMatrixJson(std::string_view text) {
  Json value;
  try {
    value = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("matrix: invalid JSON (") + e.what() + ")");
  }
  LabelScheme scheme = internal::SchemeFromJsonValue(value);
  if (!value.contains("counts") || !value.at("counts").is_array()) {
    throw ParseError("matrix: missing \"counts\" grid");
  }
  // The grid follows the file's label order; map it onto ascending order.
  const Json& body = value.contains("scheme") ? value.at("scheme") : value;
  std::vector<std::size_t> position;
  for (const Json& entry : body.at("labels")) {
    const int v = entry.is_array() ? entry[0].get<int>() : entry.get<int>();
    position.push_back(*scheme.IndexOf(v));
  }
  const Json& grid = value.at("counts");
  const std::size_t k = scheme.size();
  if (grid.size() != k) throw ValidationError("matrix: count grid must be KxK");
  ConflationMatrix::Counts counts(k, std::vector<uint64_t>(k, 0));
  for (std::size_t r = 0; r < k; ++r) {
    if (!grid[r].is_array() || grid[r].size() != k) {
      throw ValidationError("matrix: count grid must be KxK");
    }
    for (std::size_t c = 0; c < k; ++c) {
      const Json& cell = grid[r][c];
      if (!cell.is_number_unsigned() && !(cell.is_number_integer() &&
                                          cell.get<int64_t>() >= 0)) {
        throw ParseError("matrix: counts must be non-negative integers");
      }
      counts[position[r]][position[c]] = cell.get<uint64_t>();
    }
  }
  const double smoothing =
      value.contains("smoothing") ? value.at("smoothing").get<double>() : 0.0;
  return ConflationMatrix(std::move(scheme), std::move(counts), smoothing);
}

ConflationMatrix LoadMatrixFile(const std::string& path) {
  return ParseMatrixJson(internal::ReadFileToString(path));
}

std::string FormatMatrixTable(const ConflationMatrix& matrix) {
  const auto& labels = matrix.scheme().labels();
  const std::size_t k = labels.size();
  std::size_t name_width = 4;
  for (const Label& l : labels) name_width = std::max(name_width, l.name.size());
  std::size_t cell_width = 4;
  for (const auto& row : matrix.counts()) {
    for (uint64_t c : row) {
      cell_width = std::max(cell_width, std::to_string(c).size() + 1);
    }
  }
  for (const Label& l : labels) {
    cell_width = std::max(cell_width, std::to_string(l.value).size() + 1);
  }

  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(name_width)) << "Text"
      << std::right << std::setw(static_cast<int>(cell_width)) << "#" << " |";
  for (std::size_t b = k; b-- > 0;) {
    out << std::setw(static_cast<int>(cell_width)) << labels[b].value;
  }
  out << '\n'
      << std::string(name_width + cell_width + 2 + cell_width * k, '-') << '\n';
  for (std::size_t a = k; a-- > 0;) {
    out << std::left << std::setw(static_cast<int>(name_width))
        << labels[a].name << std::right
        << std::setw(static_cast<int>(cell_width)) << labels[a].value << " |";
    for (std::size_t b = k; b-- > 0;) {
      out << std::setw(static_cast<int>(cell_width)) << matrix.counts()[a][b];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace agreesim
