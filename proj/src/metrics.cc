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

#include "agreesim/metrics.h"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include "agreesim/errors.h"

namespace agreesim {

namespace {

void CheckInput(const MetricInput& input) {
  if (input.truth.size() != input.scores.size()) {
    throw ValidationError("metric input: truth and scores differ in length");
  }
  if (input.truth.empty()) throw ValidationError("metric input is empty");
}

void CountClasses(const MetricInput& input, std::size_t* positives,
                  std::size_t* negatives) {
  *positives = static_cast<std::size_t>(
      std::count_if(input.truth.begin(), input.truth.end(),
                    [](BinaryLabel t) { return t != 0; }));
  *negatives = input.truth.size() - *positives;
  if (*positives == 0 || *negatives == 0) {
    throw UndefinedError("AUC undefined: truth has a single class");
  }
}

}  // namespace

double Auc(const MetricInput& input) {
  CheckInput(input);
  std::size_t positives = 0;
  std::size_t negatives = 0;
  CountClasses(input, &positives, &negatives);

  const std::size_t n = input.scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return input.scores[a] < input.scores[b];
  });

  // Sum of doubled (1-based) average ranks over positives; doubling keeps
  // every tie group's average rank integral.
  uint64_t doubled_rank_sum = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && input.scores[order[j + 1]] == input.scores[order[i]]) {
      ++j;
    }
    const uint64_t doubled_avg_rank = (i + 1) + (j + 1);
    for (std::size_t k = i; k <= j; ++k) {
      if (input.truth[order[k]]) doubled_rank_sum += doubled_avg_rank;
    }
    i = j + 1;
  }
  // U = R_pos - P(P+1)/2, doubled throughout.
  const uint64_t doubled_u =
      doubled_rank_sum - static_cast<uint64_t>(positives) * (positives + 1);
  return static_cast<double>(doubled_u) /
         (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

double AucBruteForce(const MetricInput& input) {
  CheckInput(input);
  std::size_t positives = 0;
  std::size_t negatives = 0;
  CountClasses(input, &positives, &negatives);
  uint64_t doubled_wins = 0;
  for (std::size_t p = 0; p < input.truth.size(); ++p) {
    if (!input.truth[p]) continue;
    for (std::size_t q = 0; q < input.truth.size(); ++q) {
      if (input.truth[q]) continue;
      if (input.scores[p] > input.scores[q]) {
        doubled_wins += 2;
      } else if (input.scores[p] == input.scores[q]) {
        doubled_wins += 1;
      }
    }
  }
  return static_cast<double>(doubled_wins) /
         (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

double ComputeBinaryMetric(BinaryMetric metric, const MetricInput& input,
                           const LabelScheme& scheme) {
  CheckInput(input);
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < input.truth.size(); ++i) {
    const bool predicted = Binarize(input.scores[i], scheme);
    if (predicted && input.truth[i]) ++tp;
    else if (predicted) ++fp;
    else if (input.truth[i]) ++fn;
    else ++tn;
  }
  if (metric == BinaryMetric::kAccuracy) {
    return static_cast<double>(tp + tn) /
           static_cast<double>(input.truth.size());
  }
  if (tp == 0) return 0.0;
  return 2.0 * static_cast<double>(tp) /
         static_cast<double>(2 * tp + fp + fn);
}

namespace {

std::mutex& RegistryMutex() {
  static std::mutex mu;
  return mu;
}

std::map<std::string, MetricFn, std::less<>>& Registry() {
  static auto* registry = new std::map<std::string, MetricFn, std::less<>>{
      {"auc", [](const MetricInput& in, const LabelScheme&) { return Auc(in); }},
      {"accuracy",
       [](const MetricInput& in, const LabelScheme& scheme) {
         return ComputeBinaryMetric(BinaryMetric::kAccuracy, in, scheme);
       }},
      {"f1",
       [](const MetricInput& in, const LabelScheme& scheme) {
         return ComputeBinaryMetric(BinaryMetric::kF1, in, scheme);
       }},
  };
  return *registry;
}

}  // namespace

const MetricFn& LookupMetric(std::string_view name) {
  std::lock_guard<std::mutex> lock(RegistryMutex());
  auto& registry = Registry();
  auto it = registry.find(name);
  if (it == registry.end()) {
    std::string known;
    for (const auto& [key, fn] : registry) {
      known += known.empty() ? key : ", " + key;
    }
    throw ConfigError("unknown metric \"" + std::string(name) +
                      "\" (known: " + known + ")");
  }
  return it->second;
}

std::vector<std::string> MetricNames() {
  std::lock_guard<std::mutex> lock(RegistryMutex());
  std::vector<std::string> names;
  for (const auto& [key, fn] : Registry()) names.push_back(key);
  return names;
}

void RegisterMetric(std::string name, MetricFn fn) {
  std::lock_guard<std::mutex> lock(RegistryMutex());
  Registry()[std::move(name)] = std::move(fn);
}

}  // namespace agreesim
