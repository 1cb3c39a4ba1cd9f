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

#ifndef AGREESIM_METRICS_H_
#define AGREESIM_METRICS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agreesim/label_core.h"

namespace agreesim {

// 1 = positive, 0 = negative. A byte rather than bool so that truth vectors
// can be viewed as spans.
using BinaryLabel = uint8_t;

// Binary truth with one real-valued score per item.
struct MetricInput {
  std::span<const BinaryLabel> truth;
  std::span<const double> scores;
};

// Rank-based (Mann-Whitney) ROC AUC with average ranks for ties. Throws
// UndefinedError when truth is single-class, ValidationError on mismatched
// or empty input.
double Auc(const MetricInput& input);

// O(P*N) enumeration of positive/negative pairs, wins + 1/2 ties. Reference
// implementation for tests.
double AucBruteForce(const MetricInput& input);

enum class BinaryMetric { kAccuracy, kF1 };

// Scores are binarized with the scheme threshold first. F1 is 0 when there
// are no true positives.
double ComputeBinaryMetric(BinaryMetric metric, const MetricInput& input,
                           const LabelScheme& scheme);

// A metric bound to a scheme, as used by the simulation engine.
using MetricFn =
    std::function<double(const MetricInput& input, const LabelScheme& scheme)>;

// Registered names: "auc", "accuracy", "f1". Throws ConfigError for an
// unknown name, listing the known ones.
const MetricFn& LookupMetric(std::string_view name);
std::vector<std::string> MetricNames();
// Adds or replaces a metric.
void RegisterMetric(std::string name, MetricFn fn);

}  // namespace agreesim

#endif  // AGREESIM_METRICS_H_
