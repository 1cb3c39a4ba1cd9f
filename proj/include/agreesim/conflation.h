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

#ifndef AGREESIM_CONFLATION_H_
#define AGREESIM_CONFLATION_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "agreesim/label_core.h"
#include "agreesim/rng.h"

namespace agreesim {

// Symmetric label co-occurrence counts between annotators of the same
// document. Row-normalised, row `a` is the distribution of the label a
// second annotator reports when one annotator reported `a`.
//
// Rows and columns follow the scheme's ascending value order.
class ConflationMatrix {
 public:
  using Counts = std::vector<std::vector<uint64_t>>;

  // Throws ValidationError if `counts` is not K x K for the scheme's K
  // labels, is asymmetric, or `smoothing` is negative. `smoothing` is added
  // to every cell before row normalisation; the raw counts are kept.
  ConflationMatrix(LabelScheme scheme, Counts counts, double smoothing = 0.0);

  const LabelScheme& scheme() const { return scheme_; }
  const Counts& counts() const { return counts_; }
  std::size_t size() const { return counts_.size(); }
  double smoothing() const { return smoothing_; }

  uint64_t Total() const;
  uint64_t Trace() const;
  uint64_t RowSum(std::size_t row) const;

  // Row distribution indexed by scheme position. A row without mass
  // (all-zero counts, no smoothing) is the point mass on the row's label.
  const std::vector<double>& RowDistribution(std::size_t row) const {
    return row_probs_.at(row);
  }
  // Same, addressed by label value. Throws ValidationError for a value
  // outside the scheme.
  const std::vector<double>& RowDistributionFor(int value) const;

  // Draws the label a human would conflate `value` with.
  int SampleConflated(int value, Rng& rng) const;

  // trace / total of the raw counts.
  double Agreement() const;

  bool IsIdentityLike() const;

 private:
  LabelScheme scheme_;
  Counts counts_;
  double smoothing_;
  std::vector<std::vector<double>> row_probs_;
};

// Counts every ordered pair (i, j), i != j, of annotator positions within
// each document. Throws UndefinedError("conflation unlearnable") when no
// document has two or more labels.
ConflationMatrix LearnConflation(const Dataset& dataset, double smoothing = 0.0);

// Reference counts for the four-level controversy scheme, learned from 343
// annotated web pages. Rows/columns in ascending order -1, 0, 1, 2.
ConflationMatrix ControversyReferenceMatrix();

// {"labels":[[2,"..."],...],"positive_threshold":0.5,"counts":[[...]]}.
// The count grid follows the label list order, highest value first.
std::string MatrixToJson(const ConflationMatrix& matrix);
ConflationMatrix ParseMatrixJson(std::string_view text);
ConflationMatrix LoadMatrixFile(const std::string& path);

// Aligned text table: one row per label (highest value first) with its
// name, value and the counts it was conflated with.
std::string FormatMatrixTable(const ConflationMatrix& matrix);

}  // namespace agreesim

#endif  // AGREESIM_CONFLATION_H_
