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

// Generative models of how a human would label a document, given the labels
// its annotators actually assigned.
//
// A model maps each document's label multiset to one value. Leaf models
// aggregate the multiset (average, max, a uniformly sampled label, or the
// binarized average used as the conventional gold standard); composite
// models perturb the value their base produced:
//
//   flip(p, base)    keep the base value with probability p, otherwise
//                    replace it with a different label;
//   conflate(base)   replace the base value with a label drawn from the
//                    conflation matrix row of that value.
//
// Composites evaluate innermost first for every document, so
// conflate(sample) samples a label and then conflates it.
//
// Text syntax (case-insensitive, whitespace-tolerant):
//
//   average | max | sample | truth | flip(<p>, <spec>) | conflate(<spec>)

#ifndef AGREESIM_MODELS_H_
#define AGREESIM_MODELS_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "agreesim/conflation.h"
#include "agreesim/label_core.h"
#include "agreesim/rng.h"

namespace agreesim {

class ModelSpec {
 public:
  enum class Kind { kAverage, kMax, kSample, kCanonicalTruth, kFlip, kConflate };

  static ModelSpec Average() { return ModelSpec(Kind::kAverage); }
  static ModelSpec Max() { return ModelSpec(Kind::kMax); }
  static ModelSpec Sample() { return ModelSpec(Kind::kSample); }
  static ModelSpec CanonicalTruth() { return ModelSpec(Kind::kCanonicalTruth); }
  // Throws ValidationError unless 0 <= keep_probability <= 1.
  static ModelSpec Flip(double keep_probability, ModelSpec base);
  static ModelSpec Conflate(ModelSpec base);

  Kind kind() const { return kind_; }
  // Only meaningful for kFlip.
  double keep_probability() const { return keep_probability_; }
  // Only valid for kFlip and kConflate.
  const ModelSpec& base() const { return *base_; }

  bool IsComposite() const { return base_ != nullptr; }
  bool RequiresMatrix() const;
  // Nesting depth; leaves have depth 1.
  int Depth() const;

  // Canonical text form, parseable by ParseModelSpec.
  std::string ToString() const;

  bool operator==(const ModelSpec& other) const;

 private:
  explicit ModelSpec(Kind kind) : kind_(kind) {}

  Kind kind_;
  double keep_probability_ = 1.0;
  std::shared_ptr<const ModelSpec> base_;
};

inline constexpr int kMaxModelDepth = 32;

// Throws ParseError naming the offending token.
ModelSpec ParseModelSpec(std::string_view text);

// Which labels a flip may move a value to.
enum class FlipSpace {
  // The base value is binarized and flips between the scheme's positive and
  // negative representative labels.
  kBinary,
  // The base value flips to one of the other K-1 scheme labels.
  kOrdinal,
};

struct ModelOptions {
  // Required when the spec contains conflate.
  const ConflationMatrix* matrix = nullptr;
  FlipSpace flip_space = FlipSpace::kBinary;
};

// One value per document, in dataset order.
struct Assignment {
  std::vector<double> values;
  // True when every value is a scheme label.
  bool integral_only = true;
};

// Throws ConfigError when `spec` cannot be applied under `options`: a
// missing or mismatched matrix, or a conflation / ordinal flip whose base
// produces fractional values.
void ValidateModel(const ModelSpec& spec, const LabelScheme& scheme,
                   const ModelOptions& options);

// Applies `spec` to every document. Deterministic given the rng state.
Assignment ApplyModel(const ModelSpec& spec, const Dataset& dataset,
                      const ModelOptions& options, Rng& rng);

double AverageLabel(const Document& doc);
int MaxLabel(const Document& doc);
// Uniform over annotator positions, so repeated labels weigh more.
int SampleLabel(const Document& doc, Rng& rng);

// Keeps `value` with probability `keep_probability`; otherwise returns one
// of the other scheme labels uniformly.
int FlipLabel(int value, double keep_probability, const LabelScheme& scheme,
              Rng& rng);

// Binarized average per document, expressed as the scheme's positive or
// negative representative label.
Assignment CanonicalTruth(const Dataset& dataset);

}  // namespace agreesim

#endif  // AGREESIM_MODELS_H_
